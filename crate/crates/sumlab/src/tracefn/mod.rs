//! The catalog of trace-function kernels `K : F_q -> C`.
//!
//! Each kernel is tabulated with its weight-0 normalization and the
//! extension-by-zero convention at singular points, plus metadata (rank,
//! normalization exponent, real-valuedness) used by purity checks and
//! reports.  Builders compute sums by multiplicative convolution in the
//! discrete-log domain; every table is required to match a direct
//! nested-loop oracle on small fields.

pub mod builders;
pub mod catalog;
pub mod conv;
pub mod export;
pub mod structure;

pub use builders::{
    fiber_count, hypergeometric, is_kummer_induced, kloosterman, kloosterman_chars,
    monomial_product_sum, poly_phase_ft, pullback, pullback_power, rank_one, toric_kernel,
};
pub use catalog::KernelSpec;
pub use structure::{is_supermorse, sidon_critical_values, SidonStatus};

use crate::C64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceError {
    #[error("character multisets must be disjoint")]
    NotDisjoint,
    #[error("polynomial degree {0} must be below the characteristic {1}")]
    DegreeTooLarge(usize, u64),
    #[error("matrix is singular mod q")]
    SingularMatrix,
    #[error("exponent {0} vanishes mod q")]
    ZeroExponent(i64),
    #[error("empty parameter list")]
    EmptyParams,
    #[error("kernel requires a nontrivial character or nonconstant phase")]
    TrivialKernel,
    #[error("kernel has no extension-field tabulation")]
    UnsupportedExtension,
    #[error("splitting-field search exceeded the cap (degree {0})")]
    ExtensionTooLarge(u32),
    #[error("malformed kernel id: {0}")]
    BadSpec(String),
}

/// A tabulated kernel over a field of `q` elements (prime or extension).
///
/// `values[x]` is `K(x)` for the integer encoding `x`; `inf_value` is
/// `K(∞)`, which is 0 for every catalog kernel and only becomes nonzero
/// through fractional-linear pullbacks (tracking it keeps pullback by `γ`
/// followed by `γ^{-1}` an exact inverse).
#[derive(Debug, Clone)]
pub struct TraceTable {
    pub q: u64,
    pub values: Vec<C64>,
    pub inf_value: C64,
    pub label: String,
    pub rank: u32,
    /// `w` such that the tabulated values carry a `q^{-w}` normalization.
    pub norm_exponent: f64,
    pub real_valued: bool,
}

impl TraceTable {
    pub fn new(q: u64, values: Vec<C64>, label: impl Into<String>, rank: u32) -> Self {
        assert_eq!(values.len() as u64, q);
        TraceTable {
            q,
            values,
            inf_value: C64::new(0.0, 0.0),
            label: label.into(),
            rank,
            norm_exponent: 0.0,
            real_valued: false,
        }
    }

    pub fn value(&self, x: u64) -> C64 {
        self.values[x as usize]
    }

    /// `max_x |K(x)|`.
    pub fn sup_norm(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v.norm())
            .fold(0.0f64, f64::max)
    }

    /// Points violating the empirical purity cap `|K| ≤ rank + 2`
    /// (reported by surveys, never fatal).
    pub fn purity_violations(&self) -> Vec<u64> {
        let cap = self.rank as f64 + 2.0;
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.norm() > cap)
            .map(|(x, _)| x as u64)
            .collect()
    }

    /// Largest imaginary part, for validating the `real_valued` flag.
    pub fn max_imag(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v.im.abs())
            .fold(0.0f64, f64::max)
    }

    /// A constant-1 kernel on `F_q^×` (0 at 0), used by counting oracles.
    pub fn indicator_units(q: u64) -> Self {
        let mut values = vec![C64::new(1.0, 0.0); q as usize];
        values[0] = C64::new(0.0, 0.0);
        let mut t = TraceTable::new(q, values, "ones", 1);
        t.real_valued = true;
        t
    }
}

/// A multiset of multiplicative-character indices in `Z/(q−1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharMultiset {
    indices: Vec<u64>,
}

impl CharMultiset {
    /// Indices are reduced mod `q−1` and kept sorted so multiset equality
    /// is vector equality.
    pub fn new(qm1: u64, indices: &[u64]) -> Self {
        let mut v: Vec<u64> = indices.iter().map(|&j| j % qm1).collect();
        v.sort_unstable();
        CharMultiset { indices: v }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    pub fn is_disjoint_from(&self, other: &CharMultiset) -> bool {
        self.indices.iter().all(|j| !other.indices.contains(j))
    }

    /// The multiset shifted by `s` mod `qm1`, re-sorted.
    pub fn shifted(&self, qm1: u64, s: u64) -> CharMultiset {
        let shifted: Vec<u64> = self.indices.iter().map(|&j| (j + s) % qm1).collect();
        CharMultiset::new(qm1, &shifted)
    }

    pub fn all_trivial(&self) -> bool {
        self.indices.iter().all(|&j| j == 0)
    }
}
