use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{OpucError, Result};
use crate::families::Family;
use crate::measure::DEFAULT_GRID_SIZE;
use crate::outer::DEFAULT_DELTA_GRID_SIZE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Mnt,
    Entropy,
    SchurIdentities,
    Summability,
    Scattering,
    All,
}

impl Experiment {
    pub const SUITES: [Experiment; 5] = [
        Experiment::Entropy,
        Experiment::SchurIdentities,
        Experiment::Mnt,
        Experiment::Summability,
        Experiment::Scattering,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Mnt => "mnt",
            Experiment::Entropy => "entropy",
            Experiment::SchurIdentities => "schur_identities",
            Experiment::Summability => "summability",
            Experiment::Scattering => "scattering",
            Experiment::All => "all",
        }
    }

    pub fn suites(self) -> Vec<Experiment> {
        match self {
            Experiment::All => Self::SUITES.to_vec(),
            other => vec![other],
        }
    }
}

fn default_grid_size() -> usize {
    DEFAULT_GRID_SIZE
}

fn default_n_list() -> Vec<usize> {
    vec![16, 32, 64, 128, 256]
}

fn default_test_points() -> Vec<f64> {
    vec![0.0]
}

fn default_delta_grid_size() -> usize {
    DEFAULT_DELTA_GRID_SIZE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub family: Family,
    #[serde(default = "default_grid_size")]
    pub grid_size: usize,
    #[serde(default = "default_n_list")]
    pub n_list: Vec<usize>,
    /// Boundary test points, as angles.
    #[serde(default = "default_test_points")]
    pub test_points: Vec<f64>,
    pub experiment: Experiment,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    #[serde(default = "default_delta_grid_size")]
    pub delta_grid_size: usize,
    #[serde(default)]
    pub seed: u64,
    /// `ell2` truncation length `L` (default `grid_size / 128`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| OpucError::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)
            .map_err(|e| OpucError::InvalidArgument(format!("invalid config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.family.validate()?;
        if !self.grid_size.is_power_of_two() || self.grid_size < 256 {
            return Err(OpucError::InvalidArgument(format!(
                "grid_size {} must be a power of two >= 256",
                self.grid_size
            )));
        }
        if self.n_list.is_empty() || self.n_list[0] == 0 {
            return Err(OpucError::InvalidArgument("n_list must be nonempty with n >= 1".into()));
        }
        if self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(OpucError::InvalidArgument("n_list must be strictly increasing".into()));
        }
        if self.test_points.is_empty() || self.test_points.iter().any(|t| !t.is_finite()) {
            return Err(OpucError::InvalidArgument("test_points must be finite angles".into()));
        }
        if self.delta_grid_size == 0 {
            return Err(OpucError::InvalidArgument("delta_grid_size must be positive".into()));
        }
        let limit = self.parameter_limit();
        if self.param_len() > limit {
            return Err(OpucError::InvalidArgument(format!(
                "max n = {} needs {} parameters; grid_size {} supports {limit}",
                self.max_n(),
                self.param_len(),
                self.grid_size
            )));
        }
        Ok(())
    }

    pub fn max_n(&self) -> usize {
        *self.n_list.last().expect("validated nonempty")
    }

    /// Parameters kept: kernels of order `max n` need `a_0..a_{max n}`.
    pub fn param_len(&self) -> usize {
        self.max_n() + 2
    }

    fn parameter_limit(&self) -> usize {
        if self.family.is_parameter_first() {
            crate::opuc::MAX_DEGREE
        } else {
            (self.grid_size / 8).saturating_sub(crate::schur::SERIES_GUARD)
        }
    }
}
