//! ν-count tables: the multiplicities that the Hölder step concentrates
//! the Type I / Type II coefficient mass into.
//!
//! `ν(r,s)` counts triples `(m, n, u)` in their dyadic ranges with
//! `u^c m^b ≡ s` and `ū n ≡ r` mod `q`, weighted by `|α_m|`; the Type II
//! variant `ν(r, s₁, s₂)` counts `(u, n, m₁, m₂)` with `ū n ≡ r` and
//! `u^c m_i^b ≡ s_i`, weighted by `|α_{m₁} α_{m₂}|`.  Both are exact
//! enumerations with their `ℓ¹`/`ℓ²` norms reported against the proven
//! bound shapes.

use super::{check_exponent, monomial_factor, BilinearError, CoefSeq};
use crate::config::Calibration;
use crate::ffield::{Field, PrimeFieldCtx};
use std::collections::HashMap;

/// Cap on enumerated index tuples.
pub const NU_CAP: u64 = 10_000_000;

/// Norm report for a ν table.
#[derive(Debug, Clone, serde::Serialize)]
pub struct NuReport {
    pub l1: f64,
    pub l2_sq: f64,
    /// Calibrated right-hand side for `‖ν‖₁`.
    pub l1_bound: f64,
    /// Calibrated right-hand side for `‖ν‖₂²`.
    pub l2_bound: f64,
    pub entries: usize,
    pub u_start: u64,
    pub v_start: u64,
}

fn norms<K>(map: &HashMap<K, f64>) -> (f64, f64) {
    let l1 = map.values().sum();
    let l2_sq = map.values().map(|v| v * v).sum();
    (l1, l2_sq)
}

/// Type I table `(r, s) ↦ ν(r, s)` over `m ∼ M`, `n ∼ N`, `u ∼ U`; `V`
/// enters only through the recommended relation `U = N/(10V)` and is
/// recorded in the report.
#[allow(clippy::too_many_arguments)]
pub fn nu_table(
    ctx: &PrimeFieldCtx,
    b: i64,
    c: i64,
    alpha: &CoefSeq,
    n_start: u64,
    u_start: u64,
    v_start: u64,
    cal: &Calibration,
) -> Result<(HashMap<(u64, u64), f64>, NuReport), BilinearError> {
    check_exponent(ctx, b)?;
    check_exponent(ctx, c)?;
    let m_start = alpha.start();
    let work = m_start.saturating_mul(n_start).saturating_mul(u_start);
    if work > NU_CAP {
        return Err(BilinearError::TooLarge(work));
    }
    let q = ctx.q();
    let mut map: HashMap<(u64, u64), f64> = HashMap::new();
    for u in u_start..2 * u_start {
        if u % q == 0 {
            continue;
        }
        let u_inv = ctx.inv(u % q);
        let uc = ctx.powi(u % q, c);
        for (m, am) in alpha.iter() {
            let w = am.norm();
            if w == 0.0 {
                continue;
            }
            let Some(mb) = monomial_factor(ctx, m, b) else {
                continue;
            };
            let s = ctx.mul(uc, mb);
            if s == 0 {
                continue;
            }
            for n in n_start..2 * n_start {
                let r = ctx.mul(u_inv, n % q);
                if r == 0 {
                    continue;
                }
                *map.entry((r, s)).or_insert(0.0) += w;
            }
        }
    }
    let (l1, l2_sq) = norms(&map);
    let (uf, nf, mf, qf) = (
        u_start as f64,
        n_start as f64,
        m_start as f64,
        q as f64,
    );
    let report = NuReport {
        l1,
        l2_sq,
        l1_bound: cal.c_nu * uf * nf * alpha.norm_l1(),
        l2_bound: cal.c_nu
            * cal.q_eps(q)
            * alpha.norm_l2().powi(2)
            * uf
            * nf
            * (1.0 + uf * nf / qf)
            * (1.0 + mf / qf),
        entries: map.len(),
        u_start,
        v_start,
    };
    Ok((map, report))
}

/// Type II table `(r, s₁, s₂) ↦ ν(r, s₁, s₂)` over `u ∼ U`, `n ∼ N`,
/// `m₁, m₂ ∼ M`; requires `M ≤ q` and `UN ≤ q`.
pub fn nu2_table(
    ctx: &PrimeFieldCtx,
    b: i64,
    c: i64,
    alpha: &CoefSeq,
    n_start: u64,
    u_start: u64,
    cal: &Calibration,
) -> Result<(HashMap<(u64, u64, u64), f64>, NuReport), BilinearError> {
    check_exponent(ctx, b)?;
    check_exponent(ctx, c)?;
    let q = ctx.q();
    let m_start = alpha.start();
    if m_start > q || u_start * n_start > q {
        return Err(BilinearError::RangeViolation(format!(
            "need M ≤ q and UN ≤ q, got M = {m_start}, UN = {}",
            u_start * n_start
        )));
    }
    let work = u_start
        .saturating_mul(n_start)
        .saturating_mul(m_start)
        .saturating_mul(m_start);
    if work > NU_CAP {
        return Err(BilinearError::TooLarge(work));
    }
    let mut map: HashMap<(u64, u64, u64), f64> = HashMap::new();
    for u in u_start..2 * u_start {
        if u % q == 0 {
            continue;
        }
        let u_inv = ctx.inv(u % q);
        let uc = ctx.powi(u % q, c);
        // s values indexed by m, shared by both m₁ and m₂.
        let s_of: Vec<Option<(u64, f64)>> = alpha
            .iter()
            .map(|(m, am)| {
                let mb = monomial_factor(ctx, m, b)?;
                let s = ctx.mul(uc, mb);
                (s != 0).then_some((s, am.norm()))
            })
            .collect();
        for n in n_start..2 * n_start {
            let r = ctx.mul(u_inv, n % q);
            if r == 0 {
                continue;
            }
            for e1 in s_of.iter().flatten() {
                if e1.1 == 0.0 {
                    continue;
                }
                for e2 in s_of.iter().flatten() {
                    let w = e1.1 * e2.1;
                    if w == 0.0 {
                        continue;
                    }
                    *map.entry((r, e1.0, e2.0)).or_insert(0.0) += w;
                }
            }
        }
    }
    let (l1, l2_sq) = norms(&map);
    let (uf, nf, mf) = (u_start as f64, n_start as f64, m_start as f64);
    let report = NuReport {
        l1,
        l2_sq,
        l1_bound: cal.c_nu * uf * mf * nf * alpha.norm_l2().powi(2),
        l2_bound: cal.c_nu * cal.q_eps(q) * alpha.norm_l2().powi(4) * uf * nf,
        entries: map.len(),
        u_start,
        v_start: 0,
    };
    Ok((map, report))
}
