//! Calibration constants shared by surveys, reports, and acceptance runs.
//!
//! The bounds this crate measures all carry unspecified constants; every
//! threshold used to bucket or judge a measured value is collected here so
//! that reports can print the exact configuration they ran with.  The
//! defaults were frozen after a single calibration run and are pinned by
//! the acceptance suite.

use serde::{Deserialize, Serialize};

/// Multiplier set for bucket thresholds and bound reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    /// Multiplier on `q` for the lowest Σ_I bucket threshold.
    pub c_q: f64,
    /// Multiplier on `q^{3/2}` for the middle Σ_I bucket threshold.
    pub c_q32: f64,
    /// Multiplier on `q^2` (Σ_I) / `q^3` (Σ_II) for the top threshold.
    pub c_q2: f64,
    /// Constant in the moment bound `Σ|Σ_I|^{2m} ≤ C (q^{2m+2l} + q^{4m+l})`.
    pub c_moment: f64,
    /// Multiplier on `√q` for the sum-of-products cancellation threshold.
    pub c_sop: f64,
    /// Fraction of `q` that a fully-paired diagonal sum of products must
    /// exceed (`value ≥ c_diag · q`).
    pub c_diag: f64,
    /// Constant allowed in the ν-table and ξ/ζ norm reports.
    pub c_nu: f64,
    /// Exponent ε substituted for `q^ε` in reported right-hand sides.
    pub eps: f64,
}

impl Default for Calibration {
    fn default() -> Self {
        Calibration {
            c_q: 20.0,
            c_q32: 10.0,
            c_q2: 2.0,
            c_moment: 50.0,
            c_sop: 10.0,
            c_diag: 0.25,
            c_nu: 10.0,
            eps: 0.1,
        }
    }
}

impl Calibration {
    /// `q^eps` with the configured ε.
    pub fn q_eps(&self, q: u64) -> f64 {
        (q as f64).powf(self.eps)
    }
}
