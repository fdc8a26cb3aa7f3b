//! A desk-scale laboratory for exponential sums over prime finite fields.
//!
//! The crate tabulates a catalog of complex-valued kernels `K : F_q -> C`
//! (Kloosterman sums, hypergeometric sums, toric kernels, fiber counts,
//! polynomial-phase Fourier transforms, rank-one twists), evaluates the
//! complete sums and bilinear forms built from them, and measures the
//! square-root cancellation those sums are predicted to exhibit.
//!
//! Module map:
//!
//! - [`ffield`]: arithmetic in `F_q` and `F_{q^n}`, additive/multiplicative
//!   characters, Gauss sums, polynomials and rational functions.
//! - [`tracefn`]: the kernel catalog with structural tests
//!   (Kummer-induction, supermorse, Sidon) and table import/export.
//! - [`complete`]: complete sums `Σ_I`, `Σ_II`, sums of products, box
//!   averages, exchange-identity moments, and cancellation surveys.
//! - [`bilinear`]: Type I / Type II / trilinear forms, ν-count tables,
//!   ξ/ζ pushforwards, and kernel-matrix operator norms.
//! - [`goursat`]: finite-group closure, Goursat data, quasisimple tests,
//!   and coinvariant dimensions via character averaging.
//! - [`checks`]: the shared self-test suite run by the CLI.

pub mod bilinear;
pub mod checks;
pub mod complete;
pub mod config;
pub mod ffield;
pub mod goursat;
pub mod tracefn;

pub use config::Calibration;
pub use ffield::{AddChar, ExtFieldCtx, Field, MultChar, Poly, PrimeFieldCtx, RationalFn};
pub use tracefn::{KernelSpec, TraceTable};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// The seeded counter-mode RNG used for every sampled experiment.
pub use rand_chacha::ChaCha8Rng;

/// Deterministic RNG from a recorded seed.
pub fn rand_seeded(seed: u64) -> ChaCha8Rng {
    use rand_chacha::rand_core::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Tolerance for table-level identities: convolution vs. nested-loop
/// oracles, Gauss-sum moduli, character orthogonality.
pub const TOL_TABLE: f64 = 1e-9;
/// Tolerance for aggregate identities (exchange identity, Σ_II
/// decomposition, trilinear contraction), relative.
pub const TOL_IDENTITY: f64 = 1e-6;
/// Tolerance for pointwise unit-modulus checks on roots of unity and
/// character multiplicativity.
pub const TOL_UNIT: f64 = 1e-12;
/// Tolerance for power-iteration agreement between independent seeds.
pub const TOL_POWER_ITER: f64 = 1e-4;

/// Relative error |a-b| / max(|a|, |b|, 1).
pub fn rel_err(a: C64, b: C64) -> f64 {
    let denom = a.norm().max(b.norm()).max(1.0);
    (a - b).norm() / denom
}

/// Relative error for real quantities.
pub fn rel_err_f64(a: f64, b: f64) -> f64 {
    let denom = a.abs().max(b.abs()).max(1.0);
    (a - b).abs() / denom
}
