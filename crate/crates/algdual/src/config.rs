//! Run configuration: a single self-describing JSON file naming the
//! theory, the finitely presented objects, the site sample, and the
//! verification suites to execute.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, FPPresentation};
use crate::site::{build_site, SiteError, SiteMode, SiteSample};
use crate::theory::{TheoryError, TheoryPresentation};

pub const DEFAULT_BOUND: usize = 400;
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("suite references undefined presentation {0:?}")]
    UndefinedPresentation(String),
    #[error("site lists undefined object {0:?}")]
    UndefinedObject(String),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Site(#[from] SiteError),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum TheorySpec {
    Builtin(String),
    Inline {
        name: String,
        ops: Vec<(String, usize)>,
        #[serde(default)]
        axioms: Vec<(String, String)>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationSpec {
    pub generators: usize,
    #[serde(default)]
    pub relations: Vec<(String, String)>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeSpec {
    Closed,
    Truncated,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteSpec {
    pub objects: Vec<String>,
    pub mode: ModeSpec,
    #[serde(default = "default_bound")]
    pub bound: usize,
}

fn default_bound() -> usize {
    DEFAULT_BOUND
}

fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case", deny_unknown_fields)]
pub enum SuiteSpec {
    Prop1 { c: String },
    Prop2 { c: String },
    Thm3 { c: String },
    Thm4 { c: String },
    Thm5 { c: String },
    Thm6 { c: String },
    Stone { n: usize },
    ObjectClassifier,
    Kl { moduli: Vec<usize> },
}

impl SuiteSpec {
    pub fn name(&self) -> String {
        match self {
            SuiteSpec::Prop1 { .. } => "prop1".into(),
            SuiteSpec::Prop2 { .. } => "prop2".into(),
            SuiteSpec::Thm3 { .. } => "thm3".into(),
            SuiteSpec::Thm4 { .. } => "thm4".into(),
            SuiteSpec::Thm5 { .. } => "thm5".into(),
            SuiteSpec::Thm6 { .. } => "thm6".into(),
            SuiteSpec::Stone { n } => format!("stone_{n}"),
            SuiteSpec::ObjectClassifier => "object_classifier".into(),
            SuiteSpec::Kl { .. } => "kl".into(),
        }
    }

    fn exponent(&self) -> Option<&str> {
        match self {
            SuiteSpec::Prop1 { c }
            | SuiteSpec::Prop2 { c }
            | SuiteSpec::Thm3 { c }
            | SuiteSpec::Thm4 { c }
            | SuiteSpec::Thm5 { c }
            | SuiteSpec::Thm6 { c } => Some(c),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub theory: TheorySpec,
    #[serde(default)]
    pub presentations: BTreeMap<String, PresentationSpec>,
    pub site: SiteSpec,
    #[serde(default = "default_budget")]
    pub budget: u64,
    #[serde(default)]
    pub suites: Vec<SuiteSpec>,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_owned(),
            source,
        })?;
        let config: RunConfig = serde_json::from_str(&text)?;
        config.validate_references()?;
        Ok(config)
    }

    /// Name references must resolve before any realization work runs.
    fn validate_references(&self) -> Result<(), ConfigError> {
        for name in &self.site.objects {
            if !self.presentations.contains_key(name) {
                return Err(ConfigError::UndefinedObject(name.clone()));
            }
        }
        for suite in &self.suites {
            if let Some(c) = suite.exponent() {
                if !self.presentations.contains_key(c) {
                    return Err(ConfigError::UndefinedPresentation(c.to_owned()));
                }
            }
        }
        Ok(())
    }

    pub fn theory(&self) -> Result<Arc<TheoryPresentation>, ConfigError> {
        match &self.theory {
            TheorySpec::Builtin(name) => Ok(TheoryPresentation::builtin(name)?),
            TheorySpec::Inline { name, ops, axioms } => {
                let ops: Vec<(&str, usize)> =
                    ops.iter().map(|(s, a)| (s.as_str(), *a)).collect();
                let axioms: Vec<(&str, &str)> = axioms
                    .iter()
                    .map(|(l, r)| (l.as_str(), r.as_str()))
                    .collect();
                Ok(Arc::new(TheoryPresentation::new(name, &ops, &axioms)?))
            }
        }
    }

    pub fn presentation(
        &self,
        theory: &Arc<TheoryPresentation>,
        name: &str,
    ) -> Result<FPPresentation, ConfigError> {
        let spec = self
            .presentations
            .get(name)
            .ok_or_else(|| ConfigError::UndefinedPresentation(name.to_owned()))?;
        let relations: Vec<(&str, &str)> = spec
            .relations
            .iter()
            .map(|(l, r)| (l.as_str(), r.as_str()))
            .collect();
        Ok(FPPresentation::parse(
            theory.clone(),
            spec.generators,
            &relations,
        )?)
    }

    pub fn build_site(
        &self,
        theory: &Arc<TheoryPresentation>,
    ) -> Result<Arc<SiteSample>, ConfigError> {
        let mut pres = Vec::with_capacity(self.site.objects.len());
        for name in &self.site.objects {
            pres.push((name.clone(), self.presentation(theory, name)?));
        }
        let mode = match self.site.mode {
            ModeSpec::Closed => SiteMode::Closed,
            ModeSpec::Truncated => SiteMode::Truncated,
        };
        Ok(Arc::new(build_site(
            theory.clone(),
            &pres,
            self.site.bound,
            mode,
        )?))
    }
}
