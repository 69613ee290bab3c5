//! Shared site builders and independent oracles for integration
//! tests. The oracles deliberately avoid the congruence-closure and
//! end-enumeration machinery they are checking.
//!
//! Each test target compiles this module separately, so not every
//! helper is used by every target.
#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use algdual::algebra::{is_homomorphism, FPPresentation, FiniteAlgebra, Tuples};
use algdual::site::{build_site, SiteMode, SiteSample};
use algdual::theory::{numeral, TheoryPresentation};

pub fn modn(theory: &Arc<TheoryPresentation>, m: usize) -> FPPresentation {
    let num = numeral(theory, m).display(theory);
    FPPresentation::parse(theory.clone(), 0, &[(num.as_str(), "zero")]).unwrap()
}

pub fn rings_site(moduli: &[usize], mode: SiteMode) -> Arc<SiteSample> {
    let th = Arc::new(TheoryPresentation::commutative_rings());
    let pres: Vec<(String, FPPresentation)> = moduli
        .iter()
        .map(|&m| (format!("mod{m}"), modn(&th, m)))
        .collect();
    Arc::new(build_site(th, &pres, 400, mode).unwrap())
}

pub fn boolean_site() -> Arc<SiteSample> {
    let th = Arc::new(TheoryPresentation::boolean_algebras());
    let pres = vec![(
        "two".to_owned(),
        FPPresentation::new(th.clone(), 0, Vec::new()).unwrap(),
    )];
    Arc::new(build_site(th, &pres, 50, SiteMode::Closed).unwrap())
}

pub fn sets_site(n: usize) -> Arc<SiteSample> {
    let th = Arc::new(TheoryPresentation::initial());
    let pres: Vec<(String, FPPresentation)> = (0..=n)
        .map(|k| {
            (
                format!("set{k}"),
                FPPresentation::new(th.clone(), k, Vec::new()).unwrap(),
            )
        })
        .collect();
    Arc::new(build_site(th, &pres, 200, SiteMode::Truncated).unwrap())
}

/// Brute-force hom enumeration: every carrier function, filtered.
pub fn homs_brute(dom: &FiniteAlgebra, cod: &FiniteAlgebra) -> Vec<Vec<usize>> {
    Tuples::new(cod.size, dom.size)
        .filter(|map| is_homomorphism(dom, cod, map))
        .collect()
}

pub fn configs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .canonicalize()
        .unwrap()
}
