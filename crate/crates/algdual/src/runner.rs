//! Executes the suites named in a run config, in declared order, and
//! assembles the run report.
//!
//! Exit status contract: 0 all exact suites pass, 1 a verification
//! failed, 2 the config does not parse or resolve, 3 realization or
//! budget failure.

use std::path::Path;

use thiserror::Error;

use crate::config::{ConfigError, RunConfig, SuiteSpec};
use crate::duality::{
    check_prop1, check_prop2, check_thm3, check_thm4, check_thm5, check_thm6, DualityError,
};
use crate::pairing::{
    check_complete, kl_instance, object_classifier_instance, stone_instance, PairingError,
};
use crate::report::{RunReport, SiteSummary, SuiteOutcome, SuiteReport, SCHEMA};
use crate::site::SiteMode;

#[derive(Debug, Error)]
pub enum RunnerError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Duality(#[from] DualityError),
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error("cannot write report to {path}: {source}")]
    Write {
        path: std::path::PathBuf,
        source: std::io::Error,
    },
}

pub fn execute(config: &RunConfig) -> Result<RunReport, RunnerError> {
    let theory = config.theory()?;
    let site = config.build_site(&theory)?;
    let bound = config.site.bound;
    let budget = config.budget;
    let mut suites = Vec::with_capacity(config.suites.len());
    for spec in &config.suites {
        let outcome = match spec {
            SuiteSpec::Prop1 { c } => {
                let c = config.presentation(&theory, c)?;
                SuiteOutcome::Theorem(check_prop1(&c, &site, bound)?)
            }
            SuiteSpec::Prop2 { c } => {
                let c = config.presentation(&theory, c)?;
                SuiteOutcome::Theorem(check_prop2(&c, &site, bound, budget)?)
            }
            SuiteSpec::Thm3 { c } => {
                let c = config.presentation(&theory, c)?;
                SuiteOutcome::Theorem(check_thm3(&c, &site, bound, budget)?)
            }
            SuiteSpec::Thm4 { c } => {
                let c = config.presentation(&theory, c)?;
                SuiteOutcome::Theorem(check_thm4(&c, &site, bound, budget)?)
            }
            SuiteSpec::Thm5 { c } => {
                let c = config.presentation(&theory, c)?;
                SuiteOutcome::Theorem(check_thm5(&c, &site, bound, budget)?)
            }
            SuiteSpec::Thm6 { c } => {
                let c = config.presentation(&theory, c)?;
                SuiteOutcome::Theorem(check_thm6(&c, &site, bound, budget)?)
            }
            SuiteSpec::Stone { n } => {
                let instance = stone_instance(*n)?;
                SuiteOutcome::Complete(check_complete(&instance, budget)?)
            }
            SuiteSpec::ObjectClassifier => {
                SuiteOutcome::Theorem(object_classifier_instance(&site, bound)?)
            }
            SuiteSpec::Kl { moduli } => {
                SuiteOutcome::Kl(kl_instance(&site, moduli, bound, budget)?)
            }
        };
        let approximate = match &outcome {
            SuiteOutcome::Theorem(r) => r.mode == "approximate",
            SuiteOutcome::Complete(_) | SuiteOutcome::Kl(_) => false,
        };
        suites.push(SuiteReport {
            suite: spec.name(),
            approximate,
            outcome,
        });
    }
    let pass = suites
        .iter()
        .filter(|s| !s.approximate)
        .all(|s| s.outcome.pass());
    Ok(RunReport {
        schema: SCHEMA,
        theory: theory.name.clone(),
        site: SiteSummary {
            objects: site.names.clone(),
            mode: match site.mode {
                SiteMode::Closed => "closed".to_owned(),
                SiteMode::Truncated => "truncated".to_owned(),
            },
            bound,
        },
        budget,
        suites,
        pass,
    })
}

/// Full `verify` flow: load, execute, write report, print summary.
/// Returns the process exit code.
pub fn run_verify(config_path: &Path, out_override: Option<&Path>) -> i32 {
    let config = match RunConfig::load(config_path) {
        Ok(c) => c,
        Err(err) => {
            eprintln!("config error: {err}");
            return 2;
        }
    };
    let report = match execute(&config) {
        Ok(r) => r,
        Err(err) => {
            eprintln!("run error: {err}");
            return 3;
        }
    };
    let out = out_override.or(config.output.as_deref());
    if let Some(path) = out {
        if let Err(source) = std::fs::write(path, report.to_json()) {
            eprintln!(
                "run error: {}",
                RunnerError::Write {
                    path: path.to_owned(),
                    source
                }
            );
            return 3;
        }
    } else {
        print!("{}", report.to_json());
    }
    print!("{}", report.summary());
    if report.pass {
        0
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_config(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    #[test]
    fn boolean_config_passes_exactly() {
        let f = write_config(
            r#"{
              "theory": "boolean_algebras",
              "presentations": {"two": {"generators": 0}},
              "site": {"objects": ["two"], "mode": "closed", "bound": 50},
              "suites": [{"check": "thm3", "c": "two"}, {"check": "stone", "n": 2}]
            }"#,
        );
        let config = RunConfig::load(f.path()).unwrap();
        let report = execute(&config).unwrap();
        assert!(report.pass);
        assert!(report.suites.iter().all(|s| !s.approximate));
        let out = tempfile::NamedTempFile::new().unwrap();
        assert_eq!(run_verify(f.path(), Some(out.path())), 0);
    }

    #[test]
    fn planted_defect_fails_with_status_one() {
        // "mod2" actually presents the integers mod 4, so the
        // dual-number instance check at modulus 2 cannot succeed.
        let f = write_config(
            r#"{
              "theory": "commutative_rings",
              "presentations": {
                "mod1": {"generators": 0, "relations": [["one", "zero"]]},
                "mod2": {"generators": 0,
                         "relations": [["(add one (add one (add one one)))", "zero"]]}
              },
              "site": {"objects": ["mod1", "mod2"], "mode": "truncated", "bound": 100},
              "suites": [{"check": "kl", "moduli": [2]}]
            }"#,
        );
        let config = RunConfig::load(f.path()).unwrap();
        let report = execute(&config).unwrap();
        assert!(!report.pass);
        assert_eq!(report.suites[0].suite, "kl");
        let out = tempfile::NamedTempFile::new().unwrap();
        assert_eq!(run_verify(f.path(), Some(out.path())), 1);
    }

    #[test]
    fn malformed_config_is_status_two() {
        let f = write_config(r#"{"theory": "commutative_rings", "unknown_field": 1}"#);
        assert_eq!(run_verify(f.path(), None), 2);
        let undefined = write_config(
            r#"{
              "theory": "commutative_rings",
              "presentations": {},
              "site": {"objects": ["ghost"], "mode": "truncated"},
              "suites": []
            }"#,
        );
        assert_eq!(run_verify(undefined.path(), None), 2);
    }

    #[test]
    fn escaping_coproduct_in_closed_mode_is_status_three() {
        // gcd(6, 10) = 2 is absent, so the coproduct escapes.
        let six = "(add one (add one (add one (add one (add one one)))))";
        let ten = "(add one (add one (add one (add one (add one (add one \
                   (add one (add one (add one one)))))))))";
        let f = write_config(&format!(
            r#"{{
              "theory": "commutative_rings",
              "presentations": {{
                "mod6": {{"generators": 0, "relations": [["{six}", "zero"]]}},
                "mod10": {{"generators": 0, "relations": [["{ten}", "zero"]]}}
              }},
              "site": {{"objects": ["mod6", "mod10"], "mode": "closed", "bound": 200}},
              "suites": []
            }}"#
        ));
        assert_eq!(run_verify(f.path(), None), 3);
    }

    #[test]
    fn report_is_deterministic() {
        let f = write_config(
            r#"{
              "theory": "boolean_algebras",
              "presentations": {"two": {"generators": 0}},
              "site": {"objects": ["two"], "mode": "closed", "bound": 50},
              "suites": [{"check": "thm4", "c": "two"}]
            }"#,
        );
        let config = RunConfig::load(f.path()).unwrap();
        let first = execute(&config).unwrap().to_json();
        let second = execute(&config).unwrap().to_json();
        assert_eq!(first, second);
        assert!(first.contains("\"schema\""));
    }
}
