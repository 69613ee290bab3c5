//! Acceptance gate: one criterion per test, one pass/fail line each.
//! Oracles here recompute expected values by routes independent of
//! the code under test (elementwise scans, bit arithmetic, raw
//! function filtering).

mod common;

use std::sync::Arc;
use std::time::{Duration, Instant};

use algdual::algebra::FPPresentation;
use algdual::config::RunConfig;
use algdual::duality::{
    check_prop1, check_prop2, check_thm3, check_thm4, check_thm5, check_thm6,
};
use algdual::pairing::{
    check_complete, kl_instance, object_classifier_instance, stone_instance,
};
use algdual::presheaf::{
    constant, exp_const, exp_end, exp_repr, exponentials_isomorphic, forgetful_r, yoneda,
};
use algdual::runner::run_verify;
use algdual::site::SiteMode;

use common::{boolean_site, configs_dir, homs_brute, modn, rings_site, sets_site};

const BUDGET: u64 = 10_000_000;
/// The constant-exponent end on the eight-object divisor site has a
/// large raw estimate although pruning keeps the search small.
const WIDE_BUDGET: u64 = 2_000_000_000_000;

fn criterion(n: usize, desc: &str, ok: bool, elapsed: Duration, limit: Duration) {
    let status = if ok && elapsed <= limit { "pass" } else { "FAIL" };
    println!(
        "criterion {n} ({desc}): {status} [{:.2}s, limit {:.0}s]",
        elapsed.as_secs_f64(),
        limit.as_secs_f64()
    );
    assert!(ok, "criterion {n} failed: {desc}");
    assert!(
        elapsed <= limit,
        "criterion {n} exceeded time limit: {elapsed:?} > {limit:?}"
    );
}

fn divisor30() -> Arc<algdual::site::SiteSample> {
    rings_site(&[1, 2, 3, 5, 6, 10, 15, 30], SiteMode::Closed)
}

#[test]
fn criterion_01_first_transpose_bijects_onto_hom_sets() {
    let start = Instant::now();
    let site = rings_site(&[1, 2, 3, 4, 6], SiteMode::Truncated);
    let th = site.theory.clone();
    let mut ok = true;

    // Realizable exponent: the full suite, plus a raw function-filter
    // recount of every hom-set it reports.
    let mod2 = modn(&th, 2);
    let report = check_prop1(&mod2, &site, 400).unwrap();
    ok &= report.pass;
    let mod2_model = algdual::realize::realize(&mod2, 400).unwrap();
    for (b, comp) in report.components.iter().enumerate() {
        ok &= comp.rhs_size == homs_brute(&mod2_model.model, &site.objects[b].model).len();
    }

    // Exponents with no finite carrier: hom-set sizes against
    // elementwise scans of the target tables.
    let dual = FPPresentation::parse(th.clone(), 1, &[("(mul x0 x0)", "zero")]).unwrap();
    let free1 = FPPresentation::new(th.clone(), 1, Vec::new()).unwrap();
    let y_dual = yoneda(&dual, &site).unwrap();
    let y_free = yoneda(&free1, &site).unwrap();
    let mul = th.op_index("mul").unwrap();
    let zero = th.op_index("zero").unwrap();
    for b in 0..site.object_count() {
        let model = &site.objects[b].model;
        let zero_elt = model.apply(zero, &[]);
        let square_zero = (0..model.size)
            .filter(|&v| model.apply(mul, &[v, v]) == zero_elt)
            .count();
        ok &= y_dual.tuples[b].len() == square_zero;
        ok &= y_free.tuples[b].len() == model.size;
    }
    let mod4 = site.object_index("mod4").unwrap();
    ok &= y_dual.tuples[mod4].len() == 2;

    criterion(
        1,
        "first transpose onto hom-sets, truncated ring site",
        ok,
        start.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_02_projection_equation_uniqueness() {
    let start = Instant::now();
    let site = rings_site(&[1, 2, 3, 4, 6], SiteMode::Truncated);
    let dual =
        FPPresentation::parse(site.theory.clone(), 1, &[("(mul x0 x0)", "zero")]).unwrap();
    let report = check_prop2(&dual, &site, 400, BUDGET).unwrap();
    criterion(
        2,
        "projection equation holds and pins a unique family",
        report.pass,
        start.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_03_coproduct_carrier_bijection_and_nilpotent_instance() {
    let start = Instant::now();
    let mut ok = true;

    let d30 = divisor30();
    let mod6 = modn(&d30.theory, 6);
    ok &= check_thm3(&mod6, &d30, 400, BUDGET).unwrap().pass;

    let bool_site = boolean_site();
    let two = FPPresentation::new(bool_site.theory.clone(), 0, Vec::new()).unwrap();
    ok &= check_thm3(&two, &bool_site, 50, BUDGET).unwrap().pass;

    let rings = rings_site(&[1, 2, 3, 4, 6], SiteMode::Truncated);
    let kl = kl_instance(&rings, &[1, 2, 3, 4], 400, BUDGET).unwrap();
    ok &= kl.pass;
    for inst in &kl.instances {
        ok &= inst.carrier == inst.modulus * inst.modulus;
    }

    criterion(
        3,
        "carrier bijection on closed sites, square-zero adjunction",
        ok,
        start.elapsed(),
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_04_hom_presheaf_duality() {
    let start = Instant::now();
    let d30 = divisor30();
    let mod6 = modn(&d30.theory, 6);
    let r1 = check_thm4(&mod6, &d30, 400, BUDGET).unwrap();
    let bool_site = boolean_site();
    let two = FPPresentation::new(bool_site.theory.clone(), 0, Vec::new()).unwrap();
    let r2 = check_thm4(&two, &bool_site, 50, BUDGET).unwrap();
    criterion(
        4,
        "structure-respecting transpose bijective on closed sites",
        r1.pass && r2.pass && r1.components.len() == 8,
        start.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_05_double_dual_of_representable() {
    let start = Instant::now();
    let d30 = divisor30();
    let mod6 = modn(&d30.theory, 6);
    let r1 = check_thm5(&mod6, &d30, 400, BUDGET).unwrap();
    let bool_site = boolean_site();
    let two = FPPresentation::new(bool_site.theory.clone(), 0, Vec::new()).unwrap();
    let r2 = check_thm5(&two, &bool_site, 50, BUDGET).unwrap();
    criterion(
        5,
        "evaluation into the double dual bijective, triangle identity",
        r1.pass && r2.pass,
        start.elapsed(),
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_06_double_dual_of_tensor() {
    let start = Instant::now();
    let d30 = divisor30();
    let mod6 = modn(&d30.theory, 6);
    let r1 = check_thm6(&mod6, &d30, 400, BUDGET).unwrap();
    let bool_site = boolean_site();
    let two = FPPresentation::new(bool_site.theory.clone(), 0, Vec::new()).unwrap();
    let r2 = check_thm6(&two, &bool_site, 50, BUDGET).unwrap();
    criterion(
        6,
        "tensor double dual bijective, factorization and splitting",
        r1.pass && r2.pass,
        start.elapsed(),
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_07_exponential_constructions_agree() {
    let start = Instant::now();
    let mut ok = true;
    let d30 = divisor30();
    let bool_site = boolean_site();
    let cases: Vec<(Arc<algdual::site::SiteSample>, FPPresentation, usize)> = vec![
        (d30.clone(), modn(&d30.theory, 6), 400),
        (
            bool_site.clone(),
            FPPresentation::new(bool_site.theory.clone(), 0, Vec::new()).unwrap(),
            50,
        ),
    ];
    for (site, c, bound) in &cases {
        let r = forgetful_r(site);
        let repr = exp_repr(c, site, *bound).unwrap();
        let end = exp_end(&repr.yon.copresheaf, &r, WIDE_BUDGET).unwrap();
        ok &= exponentials_isomorphic(&end, &repr.exp).is_ok();
        for k in 0..=2 {
            let by_table = exp_const(k, &r, WIDE_BUDGET).unwrap();
            let by_end = exp_end(&constant(k, site), &r, WIDE_BUDGET).unwrap();
            ok &= exponentials_isomorphic(&by_end, &by_table).is_ok();
        }
    }
    criterion(
        7,
        "end, representable, and tabular exponentials isomorphic",
        ok,
        start.elapsed(),
        Duration::from_secs(120),
    );
}

/// Homomorphisms out of the powerset algebra, counted with raw bit
/// arithmetic: a function `2^n -> 2` encoded in the bits of `f`.
fn powerset_hom_count(n: usize) -> usize {
    let size = 1usize << n;
    let mask = size - 1;
    (0u64..(1u64 << size))
        .filter(|&f| {
            let val = |s: usize| ((f >> s) & 1) as usize;
            val(0) == 0
                && val(mask) == 1
                && (0..size).all(|a| {
                    val(!a & mask) == 1 - val(a)
                        && (0..size).all(|b| {
                            val(a & b) == (val(a) & val(b)) && val(a | b) == (val(a) | val(b))
                        })
                })
        })
        .count()
}

#[test]
fn criterion_08_finite_powerset_duality() {
    let start = Instant::now();
    let mut ok = true;
    for n in 0..=4 {
        let spec = stone_instance(n).unwrap();
        let report = check_complete(&spec, BUDGET).unwrap();
        ok &= report.pass;
        ok &= report.p_dual_size == n;
        ok &= powerset_hom_count(n) == n;
    }
    criterion(
        8,
        "powerset pairing complete for n <= 4, dual size = n",
        ok,
        start.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_09_added_point_classifier() {
    let start = Instant::now();
    let site = sets_site(5);
    let report = object_classifier_instance(&site, 200).unwrap();
    let sizes: Vec<usize> = report.components.iter().map(|c| c.lhs_size).collect();
    criterion(
        9,
        "B+1 bijection with identity-family added point on sets 0..5",
        report.pass && sizes == vec![1, 2, 3, 4, 5, 6],
        start.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_10_deterministic_reports() {
    let start = Instant::now();
    let dir = configs_dir();
    let mut ok = true;
    for name in [
        "boolean.json",
        "stone.json",
        "sets.json",
        "rings_truncated.json",
        "divisor30.json",
    ] {
        let config = dir.join(name);
        assert!(
            RunConfig::load(&config).is_ok(),
            "shipped config {name} must load"
        );
        let out1 = tempfile::NamedTempFile::new().unwrap();
        let out2 = tempfile::NamedTempFile::new().unwrap();
        let code1 = run_verify(&config, Some(out1.path()));
        let code2 = run_verify(&config, Some(out2.path()));
        ok &= code1 == 0 && code2 == 0;
        let bytes1 = std::fs::read(out1.path()).unwrap();
        let bytes2 = std::fs::read(out2.path()).unwrap();
        ok &= !bytes1.is_empty() && bytes1 == bytes2;
    }
    criterion(
        10,
        "repeated runs on shipped configs byte-identical, status 0",
        ok,
        start.elapsed(),
        Duration::from_secs(120),
    );
}
