//! Numerical tolerances shared by every module.
//!
//! Reports echo the effective [`NumericConfig`] so every number in them can
//! be traced back to the settings that produced it.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NumericConfig {
    /// Tikhonov shift relative to `trace(G) / dim`.
    pub tikhonov_rel: f64,
    /// Eigenvalues below `range_cutoff_rel * max` are treated as null directions.
    pub range_cutoff_rel: f64,
    /// PSD floor: min eigenvalue must be `>= -psd_tol * max`.
    pub psd_tol: f64,
    /// Points closer than this are the same point.
    pub duplicate_tol: f64,
    /// Cocycle tolerance (radians) per matrix row for rescaling checks.
    pub angle_tol: f64,
}

impl Default for NumericConfig {
    fn default() -> Self {
        Self { tikhonov_rel: 1e-12, range_cutoff_rel: 1e-12, psd_tol: 1e-10, duplicate_tol: 1e-12, angle_tol: 1e-8 }
    }
}
