//! Shared builders for unit tests.

use std::sync::Arc;

use crate::algebra::FPPresentation;
use crate::site::{build_site, SiteMode, SiteSample};
use crate::theory::{numeral, TheoryPresentation};

pub fn mod_presentations(
    theory: &Arc<TheoryPresentation>,
    moduli: &[usize],
) -> Vec<(String, FPPresentation)> {
    moduli
        .iter()
        .map(|&m| {
            let num = numeral(theory, m).display(theory);
            (
                format!("mod{m}"),
                FPPresentation::parse(theory.clone(), 0, &[(num.as_str(), "zero")]).unwrap(),
            )
        })
        .collect()
}

pub fn rings_site(moduli: &[usize], mode: SiteMode) -> Arc<SiteSample> {
    let th = Arc::new(TheoryPresentation::commutative_rings());
    let pres = mod_presentations(&th, moduli);
    Arc::new(build_site(th, &pres, 400, mode).unwrap())
}

/// The one-object Boolean site on the two-element algebra.
pub fn boolean_site() -> Arc<SiteSample> {
    let th = Arc::new(TheoryPresentation::boolean_algebras());
    let pres = vec![(
        "two".to_owned(),
        FPPresentation::new(th.clone(), 0, Vec::new()).unwrap(),
    )];
    Arc::new(build_site(th, &pres, 50, SiteMode::Closed).unwrap())
}

/// Free sets 0..n over the empty theory, truncated (disjoint unions
/// escape any finite sample).
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

/// Presentation of the integers mod `m` (zero generators).
pub fn modn_presentation(theory: &Arc<TheoryPresentation>, m: usize) -> FPPresentation {
    let num = numeral(theory, m).display(theory);
    FPPresentation::parse(theory.clone(), 0, &[(num.as_str(), "zero")]).unwrap()
}
