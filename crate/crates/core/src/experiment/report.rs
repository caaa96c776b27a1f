use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A precondition of the invariant does not hold for this measure.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub invariant: String,
    pub status: Status,
    /// Worst observed residual (or slack) behind the verdict.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Verdict {
    pub fn check(invariant: &str, residual: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        let status = if residual <= tolerance { Status::Pass } else { Status::Fail };
        Self {
            invariant: invariant.into(),
            status,
            residual: Some(residual),
            tolerance: Some(tolerance),
            detail: detail.into(),
        }
    }

    /// Passes when `value >= bound`; the residual is the value itself.
    pub fn at_least(invariant: &str, value: f64, bound: f64, detail: impl Into<String>) -> Self {
        Self {
            invariant: invariant.into(),
            status: if value >= bound { Status::Pass } else { Status::Fail },
            residual: Some(value),
            tolerance: Some(bound),
            detail: detail.into(),
        }
    }

    pub fn boolean(invariant: &str, ok: bool, detail: impl Into<String>) -> Self {
        Self {
            invariant: invariant.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            residual: None,
            tolerance: None,
            detail: detail.into(),
        }
    }

    pub fn skipped(invariant: &str, reason: impl Into<String>) -> Self {
        Self {
            invariant: invariant.into(),
            status: Status::Skipped,
            residual: None,
            tolerance: None,
            detail: reason.into(),
        }
    }

    pub fn failed(invariant: &str, reason: impl Into<String>) -> Self {
        Self {
            invariant: invariant.into(),
            status: Status::Fail,
            residual: None,
            tolerance: None,
            detail: reason.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub experiment: String,
    pub file: String,
    pub rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Runtime {
    pub version: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: u32,
    pub config: ExperimentConfig,
    pub family: String,
    pub tables: Vec<TableEntry>,
    pub verdicts: Vec<Verdict>,
    /// Reported quantities without a pass/fail claim (e.g. empirical constants).
    pub observations: serde_json::Map<String, serde_json::Value>,
    pub runtime: Runtime,
}

impl ExperimentReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.status != Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.verdicts.iter().filter(|v| v.status == status).count()
    }
}
