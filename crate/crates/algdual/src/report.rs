//! Machine-readable run reports. Content is deliberately free of
//! timings and machine identifiers so repeated runs on the same
//! config are byte-identical.

use serde::Serialize;

use crate::duality::TheoremReport;
use crate::pairing::{CompleteReport, KlReport};

pub const SCHEMA: &str = "algdual.report/1";

#[derive(Debug, Clone, Serialize)]
pub struct SiteSummary {
    pub objects: Vec<String>,
    pub mode: String,
    pub bound: usize,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum SuiteOutcome {
    Theorem(TheoremReport),
    Complete(CompleteReport),
    Kl(KlReport),
}

impl SuiteOutcome {
    pub fn pass(&self) -> bool {
        match self {
            SuiteOutcome::Theorem(r) => r.pass,
            SuiteOutcome::Complete(r) => r.pass,
            SuiteOutcome::Kl(r) => r.pass,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    /// Truncated-site results are informational only; they never
    /// affect the exit status.
    pub approximate: bool,
    #[serde(flatten)]
    pub outcome: SuiteOutcome,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub theory: String,
    pub site: SiteSummary,
    pub budget: u64,
    pub suites: Vec<SuiteReport>,
    /// Every exact suite passed.
    pub pass: bool,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for suite in &self.suites {
            let status = if suite.outcome.pass() { "pass" } else { "FAIL" };
            let tag = if suite.approximate {
                " (approximate)"
            } else {
                ""
            };
            out.push_str(&format!("{}: {}{}\n", suite.suite, status, tag));
        }
        out.push_str(&format!(
            "overall: {}\n",
            if self.pass { "pass" } else { "FAIL" }
        ));
        out
    }
}
