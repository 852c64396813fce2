//! The single JSON document every command emits.

use std::io::Write as _;
use std::path::Path;

use serde::Serialize;
use specfam::family::{DomainProfile, FamilyDiagnostics, Route};
use specfam::quadrature::ErrorRow;
use specfam::splitting::SplitResiduals;
use specfam::subspace::CheckOutcome;

use crate::error::{CliError, Result};
use crate::gallery::{LoadInfo, OperatorSpec};

pub const TOOL: &str = "specfam";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    /// Which statement of the underlying theory this check exercises.
    pub anchor: String,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub strict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    pub fn from_outcome(name: &str, anchor: &str, outcome: CheckOutcome, tol_scale: f64) -> Self {
        Self {
            name: name.into(),
            anchor: anchor.into(),
            passed: outcome.passes_with(tol_scale),
            residual: outcome.residual,
            tolerance: if outcome.strict {
                0.0
            } else {
                outcome.tolerance * tol_scale
            },
            strict: outcome.strict,
            note: None,
        }
    }

    pub fn failed(name: &str, anchor: &str, error: impl std::fmt::Display) -> Self {
        Self {
            name: name.into(),
            anchor: anchor.into(),
            passed: false,
            residual: f64::NAN,
            tolerance: f64::NAN,
            strict: false,
            note: Some(format!("error: {error}")),
        }
    }

    pub fn vacuous(name: &str, anchor: &str, why: &str) -> Self {
        Self {
            name: name.into(),
            anchor: anchor.into(),
            passed: true,
            residual: 0.0,
            tolerance: 0.0,
            strict: false,
            note: Some(format!("vacuous: {why}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunConfig {
    /// Seed for the random test vectors of the battery.
    pub seed: u64,
    pub k_max: u64,
    pub tol_scale: f64,
    pub trials: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            k_max: 64,
            tol_scale: 1.0,
            trials: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilySummary {
    pub route: Route,
    pub jump_points: Vec<f64>,
    pub increment_ranks: Vec<usize>,
    pub diagnostics: FamilyDiagnostics,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremes {
    pub min: f64,
    pub max: f64,
}

impl Extremes {
    pub fn of(values: &[f64]) -> Option<Self> {
        let min = values.iter().copied().reduce(f64::min)?;
        let max = values.iter().copied().reduce(f64::max)?;
        Some(Self { min, max })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitSummary {
    pub beta: f64,
    pub rank_e: usize,
    pub rank_complement: usize,
    pub spectrum_minus: Option<Extremes>,
    pub spectrum_plus: Option<Extremes>,
    pub residuals: SplitResiduals,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureSummary {
    /// The sums need `A >= 0`, so they run on `A - shift·I`.
    pub shift: f64,
    pub n: u64,
    pub norm_sqr: f64,
    pub table: Vec<ErrorRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileSummary {
    pub label: &'static str,
    #[serde(flatten)]
    pub profile: DomainProfile,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub input: OperatorSpec,
    pub loaded: LoadInfo,
    pub config: RunConfig,
    pub passed: bool,
    /// Failing records come first.
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileSummary>,
}

impl Report {
    pub fn new(
        command: &'static str,
        input: OperatorSpec,
        loaded: LoadInfo,
        config: RunConfig,
    ) -> Self {
        Self {
            tool: TOOL,
            version: env!("CARGO_PKG_VERSION"),
            command,
            input,
            loaded,
            config,
            passed: true,
            checks: Vec::new(),
            family: None,
            split: None,
            quadrature: None,
            profile: None,
        }
    }

    /// Orders failures first and sets the overall status.
    pub fn finish(mut self) -> Self {
        self.checks.sort_by_key(|c| c.passed);
        self.passed = self.checks.iter().all(|c| c.passed);
        self
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(contents.as_bytes())
        .map_err(|e| CliError::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}
