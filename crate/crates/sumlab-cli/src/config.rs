//! Canonical experiment configuration embedded in every artifact.
//!
//! The canonical form is the JSON serialization with fields in
//! declaration order and absent options omitted; `parse(canonical())`
//! round-trips to an identical value, and every run prints its
//! canonical config inside the JSON summary so artifacts are
//! self-describing.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ExperimentConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ext: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub big_j: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub big_m: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub big_n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub big_u: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub big_v: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mexp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nexp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagonal_samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coef: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    /// Calibration overrides as `(name, value)` pairs, sorted by name.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub calibration: Vec<(String, f64)>,
}

impl ExperimentConfig {
    pub fn new(command: &str) -> Self {
        ExperimentConfig {
            command: command.to_string(),
            ..Default::default()
        }
    }

    /// Canonical string form; stable across runs for equal configs.
    pub fn canonical(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Inverse of [`canonical`](Self::canonical); used by the round-trip
    /// invariant test and by consumers replaying recorded configs.
    #[allow(dead_code)]
    pub fn parse(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// Apply `(name, value)` overrides to the default calibration.
pub fn calibration_from(overrides: &[(String, f64)]) -> Result<sumlab::Calibration, String> {
    let mut cal = sumlab::Calibration::default();
    for (name, value) in overrides {
        match name.as_str() {
            "c_q" => cal.c_q = *value,
            "c_q32" => cal.c_q32 = *value,
            "c_q2" => cal.c_q2 = *value,
            "c_moment" => cal.c_moment = *value,
            "c_sop" => cal.c_sop = *value,
            "c_diag" => cal.c_diag = *value,
            "c_nu" => cal.c_nu = *value,
            "eps" => cal.eps = *value,
            other => return Err(format!("unknown calibration constant {other:?}")),
        }
    }
    Ok(cal)
}
