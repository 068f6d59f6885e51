//! Structured check results shared by every verification suite.

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    HypothesisFailed,
    FailedWithError,
}

impl Status {
    /// Exit-code semantics: skipped checks do not fail a run.
    pub fn is_ok(self) -> bool {
        matches!(self, Status::Pass | Status::Skipped)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub max_residual: Option<f64>,
    pub tolerance: f64,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    /// PASS iff `residual <= tolerance`; NaN always fails.
    pub fn measured(name: impl Into<String>, residual: f64, tolerance: f64) -> Check {
        let status = if residual <= tolerance {
            Status::Pass
        } else {
            Status::Fail
        };
        Check {
            name: name.into(),
            max_residual: residual.is_finite().then_some(residual),
            tolerance,
            status,
            note: None,
        }
    }

    pub fn skipped(name: impl Into<String>, tolerance: f64, note: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            max_residual: None,
            tolerance,
            status: Status::Skipped,
            note: Some(note.into()),
        }
    }

    pub fn errored(name: impl Into<String>, tolerance: f64, err: &Error) -> Check {
        let (status, residual) = match err.root() {
            Error::HypothesisFailed { residual, .. } => {
                (Status::HypothesisFailed, residual.is_finite().then_some(*residual))
            }
            _ => (Status::FailedWithError, None),
        };
        Check {
            name: name.into(),
            max_residual: residual,
            tolerance,
            status,
            note: Some(err.to_string()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Check {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub count: usize,
    pub n_conv: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub provenance: Provenance,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, provenance: Provenance) -> SuiteReport {
        SuiteReport {
            suite: suite.into(),
            checks: Vec::new(),
            provenance,
        }
    }

    pub fn push(&mut self, check: Check) -> &mut Self {
        self.checks.push(check);
        self
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.status.is_ok())
    }

    /// Replaces every tolerance and recomputes measured statuses.
    pub fn retolerance(&mut self, tolerance: f64) {
        for c in &mut self.checks {
            c.tolerance = tolerance;
            if matches!(c.status, Status::Pass | Status::Fail) {
                c.status = match c.max_residual {
                    Some(r) if r <= tolerance => Status::Pass,
                    _ => Status::Fail,
                };
            }
        }
    }
}

/// Max-abs entry of an iterator of residuals; NaN propagates.
pub(crate) fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |acc: f64, v| {
        if acc.is_nan() || v.is_nan() {
            f64::NAN
        } else {
            acc.max(v.abs())
        }
    })
}

/// Largest per-point residual over `points`; NaN propagates and the first
/// error aborts.
pub(crate) fn worst<T>(
    points: &[T],
    mut residual: impl FnMut(&T) -> crate::error::Result<f64>,
) -> crate::error::Result<f64> {
    let mut acc: f64 = 0.0;
    for p in points {
        let r = residual(p)?;
        acc = if acc.is_nan() || r.is_nan() { f64::NAN } else { acc.max(r) };
    }
    Ok(acc)
}
