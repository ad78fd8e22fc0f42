//! Numeric defaults, gathered in one place and overridable from a TOML file.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{OriginPolicy, Preparation, ResampleMode};

pub const DEFAULT_N_VERTICES: usize = 32;
pub const DEFAULT_DIM: usize = 14;
pub const DEFAULT_LAMBDA: f64 = 2.0;
pub const DEFAULT_K: usize = 3;
pub const DEFAULT_RESOLUTION: usize = 512;
/// Scores are clamped to `[EPSILON, 1 - EPSILON]` before any logarithm.
pub const EPSILON: f64 = 1e-6;
pub const DEFAULT_NMS_THRESHOLD: f64 = 0.5;
pub const FOCAL_ALPHA: f64 = 0.25;
pub const FOCAL_GAMMA: f64 = 2.0;

/// Every tunable number the CLI uses. Missing keys in a config file keep
/// their defaults; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    pub n_vertices: usize,
    pub dim: usize,
    pub lambda: f64,
    pub k: usize,
    pub resolution: usize,
    pub epsilon: f64,
    pub nms_threshold: f64,
    pub focal_alpha: f64,
    pub focal_gamma: f64,
    pub origin_policy: OriginPolicy,
    pub resample: ResampleMode,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            n_vertices: DEFAULT_N_VERTICES,
            dim: DEFAULT_DIM,
            lambda: DEFAULT_LAMBDA,
            k: DEFAULT_K,
            resolution: DEFAULT_RESOLUTION,
            epsilon: EPSILON,
            nms_threshold: DEFAULT_NMS_THRESHOLD,
            focal_alpha: FOCAL_ALPHA,
            focal_gamma: FOCAL_GAMMA,
            origin_policy: OriginPolicy::BBoxCenter,
            resample: ResampleMode::Sides,
        }
    }
}

impl Settings {
    pub fn from_toml(text: &str) -> Result<Self> {
        let s: Settings = toml::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_vertices < 4 {
            return Err(Error::arg("n_vertices must be at least 4"));
        }
        if self.dim == 0 || self.dim > 2 * self.n_vertices {
            return Err(Error::arg(format!(
                "dim must be in 1..={}, got {}",
                2 * self.n_vertices,
                self.dim
            )));
        }
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(Error::arg("lambda must be finite and non-negative"));
        }
        if self.k == 0 {
            return Err(Error::arg("k must be at least 1"));
        }
        if self.resolution == 0 {
            return Err(Error::arg("resolution must be positive"));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
            return Err(Error::arg("epsilon must be in (0, 0.5)"));
        }
        if !(self.nms_threshold > 0.0 && self.nms_threshold < 1.0) {
            return Err(Error::arg("nms_threshold must be in (0, 1)"));
        }
        if !(self.focal_alpha.is_finite() && self.focal_gamma.is_finite()) {
            return Err(Error::arg("focal parameters must be finite"));
        }
        Ok(())
    }

    pub fn preparation(&self) -> Preparation {
        Preparation {
            n_vertices: self.n_vertices,
            origin_policy: self.origin_policy,
            resample: self.resample,
        }
    }
}
