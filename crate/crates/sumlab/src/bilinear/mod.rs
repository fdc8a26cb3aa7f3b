//! Bilinear and trilinear forms with monomial arguments: Type I sums
//! `Σ α_m K(m^b n^c)`, Type II sums `Σ α_m β_n K(m^b n^c)`, trilinear
//! sums `Σ α_j β_m γ_n K(j^a m^b n^c)`, together with their trivial
//! bounds, the predicted right-hand sides, worst-case coefficient
//! analysis via operator norms, ν-count tables, and ξ/ζ pushforwards.
//!
//! Ranges follow the `n ∼ N` convention: a sequence of start `N` is
//! supported on the integers `[N, 2N)`.

pub mod holder;
pub mod nu;
pub mod opnorm;
pub mod pushforward;

pub use holder::{holder_chain_report, HolderReport};
pub use nu::{nu2_table, nu_table, NuReport};
pub use opnorm::{operator_norm, singular_coefs, OpNormReport};
pub use pushforward::{xi_zeta, XiZetaReport};

use crate::ffield::{Field, PrimeFieldCtx};
use crate::tracefn::TraceTable;
use crate::C64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BilinearError {
    #[error("exponent {0} vanishes mod q")]
    BadExponent(i64),
    #[error("range violation: {0}")]
    RangeViolation(String),
    #[error("enumeration of ~{0} entries exceeds the cap")]
    TooLarge(u64),
    #[error("constraint violation: {0}")]
    ConstraintViolation(String),
}

/// A coefficient sequence supported on `[M, 2M)` with cached norms.
#[derive(Debug, Clone)]
pub struct CoefSeq {
    start: u64,
    values: Vec<C64>,
    l1: f64,
    l2: f64,
    sup: f64,
}

impl CoefSeq {
    /// Values indexed by `m − M` for `m ∈ [M, 2M)`; the length must be
    /// exactly `M`.
    pub fn new(start: u64, values: Vec<C64>) -> Self {
        assert!(start >= 1, "start must be at least 1");
        assert_eq!(
            values.len() as u64,
            start,
            "support [M, 2M) holds exactly M integers"
        );
        let l1 = values.iter().map(|v| v.norm()).sum();
        let l2 = values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let sup = values.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
        CoefSeq {
            start,
            values,
            l1,
            l2,
            sup,
        }
    }

    pub fn ones(start: u64) -> Self {
        CoefSeq::new(start, vec![C64::new(1.0, 0.0); start as usize])
    }

    pub fn zeros(start: u64) -> Self {
        CoefSeq::new(start, vec![C64::new(0.0, 0.0); start as usize])
    }

    /// Random ±1 signs from a seeded stream.
    pub fn signs(start: u64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..start)
            .map(|_| C64::new(if rng.gen::<bool>() { 1.0 } else { -1.0 }, 0.0))
            .collect();
        CoefSeq::new(start, values)
    }

    /// Random unit-modulus complex numbers from a seeded stream.
    pub fn unit_random(start: u64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..start)
            .map(|_| {
                let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                C64::new(theta.cos(), theta.sin())
            })
            .collect();
        CoefSeq::new(start, values)
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Iterate `(m, α_m)` over the support.
    pub fn iter(&self) -> impl Iterator<Item = (u64, C64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.start + i as u64, v))
    }

    pub fn norm_l1(&self) -> f64 {
        self.l1
    }

    pub fn norm_l2(&self) -> f64 {
        self.l2
    }

    pub fn norm_sup(&self) -> f64 {
        self.sup
    }
}

/// One bilinear/trilinear evaluation with its bounds.
#[derive(Debug, Clone, serde::Serialize)]
pub struct BilinearReport {
    pub value: C64,
    pub trivial_bound: f64,
    /// The predicted right-hand side with implied constant 1 and ε = 0.
    pub predicted_rhs: f64,
    /// `|value| / trivial_bound` (0 when the bound degenerates).
    pub ratio: f64,
    pub q: u64,
    pub a: Option<i64>,
    pub b: i64,
    pub c: i64,
    pub j_start: Option<u64>,
    pub m_start: u64,
    pub n_start: u64,
    pub l: usize,
}

pub(crate) fn check_exponent(_ctx: &PrimeFieldCtx, e: i64) -> Result<(), BilinearError> {
    // On units, exponentiation descends to Z/(q−1), so any nonzero
    // integer exponent gives a well-defined monomial; only 0 degenerates.
    if e == 0 {
        return Err(BilinearError::BadExponent(e));
    }
    Ok(())
}

/// `x^e mod q` for an integer `x ≥ 1`; `None` when `x ≡ 0` with `e < 0`
/// (the term has a pole and contributes nothing).
pub(crate) fn monomial_factor(ctx: &PrimeFieldCtx, x: u64, e: i64) -> Option<u64> {
    let xr = x % ctx.q();
    if xr == 0 && e < 0 {
        return None;
    }
    Some(ctx.powi(xr, e))
}

fn ratio_of(value: C64, bound: f64) -> f64 {
    if bound > 0.0 {
        value.norm() / bound
    } else {
        0.0
    }
}

/// Type I sum `B(α, N) = Σ_{m∼M} Σ_{n∼N} α_m K(m^b n^c)`, exact.
pub fn type1_sum(
    ctx: &PrimeFieldCtx,
    k: &TraceTable,
    b: i64,
    c: i64,
    alpha: &CoefSeq,
    n_start: u64,
    l: usize,
) -> Result<BilinearReport, BilinearError> {
    check_exponent(ctx, b)?;
    check_exponent(ctx, c)?;
    let q = ctx.q();
    if alpha.start() > q || n_start > q {
        return Err(BilinearError::RangeViolation(format!(
            "M = {} and N = {n_start} must both be at most q = {q}",
            alpha.start()
        )));
    }
    let mut value = C64::new(0.0, 0.0);
    for (m, am) in alpha.iter() {
        let Some(mb) = monomial_factor(ctx, m, b) else {
            continue;
        };
        for n in n_start..2 * n_start {
            let Some(nc) = monomial_factor(ctx, n, c) else {
                continue;
            };
            value += am * k.value(ctx.mul(mb, nc));
        }
    }
    let mf = alpha.start() as f64;
    let nf = n_start as f64;
    let qf = q as f64;
    let trivial_bound = alpha.norm_l2() * mf.sqrt() * nf * k.sup_norm();
    let lf = l as f64;
    let predicted_rhs = alpha.norm_l2()
        * mf.sqrt()
        * nf
        * (qf.powf(1.0 + 1.5 / lf) / (mf * nf * nf)).powf(1.0 / (2.0 * lf));
    Ok(BilinearReport {
        value,
        trivial_bound,
        predicted_rhs,
        ratio: ratio_of(value, trivial_bound),
        q,
        a: None,
        b,
        c,
        j_start: None,
        m_start: alpha.start(),
        n_start,
        l,
    })
}

/// Type II sum `B(α, β) = Σ_{m∼M} Σ_{n∼N} α_m β_n K(m^b n^c)`, exact.
pub fn type2_sum(
    ctx: &PrimeFieldCtx,
    k: &TraceTable,
    b: i64,
    c: i64,
    alpha: &CoefSeq,
    beta: &CoefSeq,
    l: usize,
) -> Result<BilinearReport, BilinearError> {
    check_exponent(ctx, b)?;
    check_exponent(ctx, c)?;
    let q = ctx.q();
    if alpha.start() > q || beta.start() > q {
        return Err(BilinearError::RangeViolation(format!(
            "M = {} and N = {} must both be at most q = {q}",
            alpha.start(),
            beta.start()
        )));
    }
    let mut value = C64::new(0.0, 0.0);
    for (m, am) in alpha.iter() {
        let Some(mb) = monomial_factor(ctx, m, b) else {
            continue;
        };
        for (n, bn) in beta.iter() {
            let Some(nc) = monomial_factor(ctx, n, c) else {
                continue;
            };
            value += am * bn * k.value(ctx.mul(mb, nc));
        }
    }
    let mf = alpha.start() as f64;
    let nf = beta.start() as f64;
    let qf = q as f64;
    let trivial_bound = alpha.norm_l2() * beta.norm_l2() * (mf * nf).sqrt() * k.sup_norm();
    let lf = l as f64;
    let predicted_rhs = alpha.norm_l2()
        * beta.norm_l2()
        * (mf * nf).sqrt()
        * (1.0 / mf + (qf.powf(0.75 + 1.75 / lf) / (mf * nf)).powf(1.0 / lf)).sqrt();
    Ok(BilinearReport {
        value,
        trivial_bound,
        predicted_rhs,
        ratio: ratio_of(value, trivial_bound),
        q,
        a: None,
        b,
        c,
        j_start: None,
        m_start: alpha.start(),
        n_start: beta.start(),
        l,
    })
}

/// Trilinear sum `T(α, β, γ) = Σ_{j∼J} Σ_{m∼M} Σ_{n∼N} α_j β_m γ_n
/// K(j^a m^b n^c)`.
///
/// Terms with a factor divisible by `q` are omitted (the reduction to
/// the ξ/ζ contraction lives on the unit group), so the sum matches the
/// [`xi_zeta`] contraction exactly.
pub fn trilinear_sum(
    ctx: &PrimeFieldCtx,
    k: &TraceTable,
    a: i64,
    b: i64,
    c: i64,
    alpha: &CoefSeq,
    beta: &CoefSeq,
    gamma: &CoefSeq,
    l: usize,
) -> Result<BilinearReport, BilinearError> {
    check_exponent(ctx, a)?;
    check_exponent(ctx, b)?;
    check_exponent(ctx, c)?;
    let q = ctx.q();
    let (j_start, m_start, n_start) = (alpha.start(), beta.start(), gamma.start());
    if j_start > 4 * q || m_start * n_start > 4 * q {
        return Err(BilinearError::RangeViolation(format!(
            "need J ≤ 4q and MN ≤ 4q, got J = {j_start}, MN = {}",
            m_start * n_start
        )));
    }
    let mut value = C64::new(0.0, 0.0);
    for (j, aj) in alpha.iter() {
        if j % q == 0 {
            continue;
        }
        let ja = ctx.powi(j % q, a);
        for (m, bm) in beta.iter() {
            if m % q == 0 {
                continue;
            }
            let jm = ctx.mul(ja, ctx.powi(m % q, b));
            for (n, gn) in gamma.iter() {
                if n % q == 0 {
                    continue;
                }
                value += aj * bm * gn * k.value(ctx.mul(jm, ctx.powi(n % q, c)));
            }
        }
    }
    let (jf, mf, nf) = (j_start as f64, m_start as f64, n_start as f64);
    let qf = q as f64;
    let trivial_bound = jf * mf * nf * k.sup_norm();
    let lf = l as f64;
    let predicted_rhs = jf
        * mf
        * nf
        * (qf.sqrt() / (mf * nf) + qf / (jf.powf(lf) * mf * nf)).powf(1.0 / (2.0 * lf));
    Ok(BilinearReport {
        value,
        trivial_bound,
        predicted_rhs,
        ratio: ratio_of(value, trivial_bound),
        q,
        a: Some(a),
        b,
        c,
        j_start: Some(j_start),
        m_start,
        n_start,
        l,
    })
}
