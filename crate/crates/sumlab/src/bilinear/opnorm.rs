//! Exact worst case of a bilinear form over unit coefficient vectors:
//! the largest singular value of the kernel matrix `[K(m^b n^c)]`,
//! computed by power iteration on the Gram operator.

use super::{monomial_factor, BilinearError, CoefSeq};
use crate::ffield::{Field, PrimeFieldCtx};
use crate::tracefn::TraceTable;
use crate::{C64, TOL_POWER_ITER};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Cap on matrix entries.
pub const MATRIX_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, serde::Serialize)]
pub struct OpNormReport {
    pub sigma_max: f64,
    /// `σ_max / (√(MN)·‖K‖_∞)`: worst-case fraction of the trivial bound.
    pub ratio: f64,
    pub iters: usize,
    /// Two independent seeds agreed to [`TOL_POWER_ITER`].
    pub converged: bool,
    pub seeds: (u64, u64),
    pub m_start: u64,
    pub n_start: u64,
}

struct KernelMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<C64>, // row-major
}

impl KernelMatrix {
    fn build(
        ctx: &PrimeFieldCtx,
        k: &TraceTable,
        b: i64,
        c: i64,
        m_start: u64,
        n_start: u64,
    ) -> Result<Self, BilinearError> {
        if m_start.saturating_mul(n_start) > MATRIX_CAP {
            return Err(BilinearError::TooLarge(m_start * n_start));
        }
        let rows = m_start as usize;
        let cols = n_start as usize;
        let mut entries = vec![C64::new(0.0, 0.0); rows * cols];
        for (i, row) in entries.chunks_mut(cols).enumerate() {
            let m = m_start + i as u64;
            let Some(mb) = monomial_factor(ctx, m, b) else {
                continue; // pole row stays zero
            };
            for (j, slot) in row.iter_mut().enumerate() {
                let n = n_start + j as u64;
                if let Some(nc) = monomial_factor(ctx, n, c) {
                    *slot = k.value(ctx.mul(mb, nc));
                }
            }
        }
        Ok(KernelMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// `y = A x`.
    fn apply(&self, x: &[C64]) -> Vec<C64> {
        self.entries
            .par_chunks(self.cols)
            .map(|row| row.iter().zip(x).map(|(&a, &xi)| a * xi).sum())
            .collect()
    }

    /// `z = A^H y`.
    fn apply_adjoint(&self, y: &[C64]) -> Vec<C64> {
        (0..self.cols)
            .into_par_iter()
            .map(|j| {
                (0..self.rows)
                    .map(|i| self.entries[i * self.cols + j].conj() * y[i])
                    .sum()
            })
            .collect()
    }
}

fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: &mut [C64]) {
    let n = norm2(v);
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
}

/// One power-iteration run; returns `(σ, right singular vector, left
/// singular vector)`.
fn power_run(a: &KernelMatrix, iters: usize, seed: u64) -> (f64, Vec<C64>, Vec<C64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<C64> = (0..a.cols)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    normalize(&mut x);
    let mut sigma = 0.0;
    let mut y = vec![C64::new(0.0, 0.0); a.rows];
    for _ in 0..iters {
        y = a.apply(&x);
        sigma = norm2(&y);
        if sigma == 0.0 {
            break;
        }
        x = a.apply_adjoint(&y);
        normalize(&mut x);
    }
    normalize(&mut y);
    (sigma, x, y)
}

/// Largest singular value of `[K(m^b n^c)]` for `m ∼ M`, `n ∼ N`.
///
/// Runs power iteration from two independent seeds; `converged` records
/// whether they agree to [`TOL_POWER_ITER`] relative.
pub fn operator_norm(
    ctx: &PrimeFieldCtx,
    k: &TraceTable,
    b: i64,
    c: i64,
    m_start: u64,
    n_start: u64,
    iters: usize,
    seed: u64,
) -> Result<OpNormReport, BilinearError> {
    super::check_exponent(ctx, b)?;
    super::check_exponent(ctx, c)?;
    let a = KernelMatrix::build(ctx, k, b, c, m_start, n_start)?;
    let (s1, _, _) = power_run(&a, iters, seed);
    let (s2, _, _) = power_run(&a, iters, seed.wrapping_add(1));
    let sigma_max = s1.max(s2);
    let converged = (s1 - s2).abs() <= TOL_POWER_ITER * sigma_max.max(1.0);
    let trivial = ((m_start * n_start) as f64).sqrt() * k.sup_norm();
    Ok(OpNormReport {
        sigma_max,
        ratio: if trivial > 0.0 { sigma_max / trivial } else { 0.0 },
        iters,
        converged,
        seeds: (seed, seed.wrapping_add(1)),
        m_start,
        n_start,
    })
}

/// Coefficient sequences realizing the worst case: `(ᾱ, β)` from the
/// top singular pair, so `|Σ α_m β_n K(m^b n^c)| ≈ σ_max` with both
/// sequences of unit `ℓ²` norm.
pub fn singular_coefs(
    ctx: &PrimeFieldCtx,
    k: &TraceTable,
    b: i64,
    c: i64,
    m_start: u64,
    n_start: u64,
    iters: usize,
    seed: u64,
) -> Result<(CoefSeq, CoefSeq), BilinearError> {
    let a = KernelMatrix::build(ctx, k, b, c, m_start, n_start)?;
    let (_, right, left) = power_run(&a, iters, seed);
    let alpha = CoefSeq::new(m_start, left.iter().map(|z| z.conj()).collect());
    let beta = CoefSeq::new(n_start, right);
    Ok((alpha, beta))
}
