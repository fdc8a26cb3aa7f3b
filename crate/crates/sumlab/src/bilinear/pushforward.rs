//! ξ/ζ pushforwards: collapse the trilinear sum onto `F_q^× × F_q^×`.
//!
//! `ξ_u = Σ_{j∼J, j^a ≡ u} α_j` and `ζ_v = Σ_{m∼M, n∼N, m^b n^c ≡ v}
//! β_m γ_n`, with the definitional contraction
//! `T(α,β,γ) = Σ_{u,v ∈ F_q^×} ξ_u ζ_v K(uv)` (verified against the
//! direct triple sum on every call).

use super::{check_exponent, monomial_factor, trilinear_sum, BilinearError, CoefSeq};
use crate::config::Calibration;
use crate::ffield::{Field, PrimeFieldCtx};
use crate::tracefn::TraceTable;
use crate::{C64, TOL_IDENTITY};

/// Norm report for the pushforward tables.
#[derive(Debug, Clone, serde::Serialize)]
pub struct XiZetaReport {
    /// Relative gap between the direct trilinear sum and the contraction.
    pub identity_rel_err: f64,
    pub xi_l1: f64,
    pub xi_l2_sq: f64,
    pub zeta_l1: f64,
    pub zeta_l2_sq: f64,
    /// `|a|·J + |a|` for `‖ξ‖₁`.
    pub xi_l1_bound: f64,
    /// `C·J(J/q + 1)` for `‖ξ‖₂²`.
    pub xi_l2_bound: f64,
    /// `C·((MN)²/q + MN log²q)` for `‖ζ‖₂²`.
    pub zeta_l2_bound: f64,
}

/// Pushforward tables indexed by field element (index 0 unused), plus
/// the verified contraction report.
#[allow(clippy::too_many_arguments, clippy::type_complexity)]
pub fn xi_zeta(
    ctx: &PrimeFieldCtx,
    k: &TraceTable,
    a: i64,
    b: i64,
    c: i64,
    alpha: &CoefSeq,
    beta: &CoefSeq,
    gamma: &CoefSeq,
    cal: &Calibration,
) -> Result<(Vec<C64>, Vec<C64>, XiZetaReport), BilinearError> {
    check_exponent(ctx, a)?;
    check_exponent(ctx, b)?;
    check_exponent(ctx, c)?;
    let q = ctx.q();

    let mut xi = vec![C64::new(0.0, 0.0); q as usize];
    for (j, aj) in alpha.iter() {
        if j % q == 0 {
            continue;
        }
        xi[ctx.powi(j % q, a) as usize] += aj;
    }

    let mut zeta = vec![C64::new(0.0, 0.0); q as usize];
    for (m, bm) in beta.iter() {
        let Some(mb) = monomial_factor(ctx, m, b) else {
            continue;
        };
        if mb == 0 {
            continue;
        }
        for (n, gn) in gamma.iter() {
            if n % q == 0 {
                continue;
            }
            zeta[ctx.mul(mb, ctx.powi(n % q, c)) as usize] += bm * gn;
        }
    }

    // Contraction vs. the direct triple sum: a definitional identity.
    let mut contracted = C64::new(0.0, 0.0);
    for u in 1..q {
        if xi[u as usize] == C64::new(0.0, 0.0) {
            continue;
        }
        for v in 1..q {
            contracted += xi[u as usize] * zeta[v as usize] * k.value(ctx.mul(u, v));
        }
    }
    let direct = trilinear_sum(ctx, k, a, b, c, alpha, beta, gamma, 2)?.value;
    let identity_rel_err = crate::rel_err(direct, contracted);
    assert!(
        identity_rel_err < TOL_IDENTITY,
        "xi/zeta contraction broke: direct {direct}, contracted {contracted}"
    );

    let xi_l1: f64 = xi.iter().map(|z| z.norm()).sum();
    let xi_l2_sq: f64 = xi.iter().map(|z| z.norm_sqr()).sum();
    let zeta_l1: f64 = zeta.iter().map(|z| z.norm()).sum();
    let zeta_l2_sq: f64 = zeta.iter().map(|z| z.norm_sqr()).sum();
    let (jf, qf) = (alpha.start() as f64, q as f64);
    let mn = (beta.start() * gamma.start()) as f64;
    let af = a.unsigned_abs() as f64;
    let report = XiZetaReport {
        identity_rel_err,
        xi_l1,
        xi_l2_sq,
        zeta_l1,
        zeta_l2_sq,
        xi_l1_bound: af * jf + af,
        xi_l2_bound: cal.c_nu * jf * (jf / qf + 1.0),
        zeta_l2_bound: cal.c_nu * (mn * mn / qf + mn * qf.ln().powi(2)),
    };
    Ok((xi, zeta, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tracefn::builders::kloosterman;

    fn prime(q: u64) -> PrimeFieldCtx {
        PrimeFieldCtx::new(q).unwrap()
    }

    #[test]
    fn xi_is_indicator_for_a_equals_one() {
        let ctx = prime(101);
        let k = kloosterman(&ctx, 2);
        let cal = Calibration::default();
        let ones = CoefSeq::ones(5);
        let (xi, _, _) =
            xi_zeta(&ctx, &k, 1, 1, 1, &ones, &ones, &ones, &cal).unwrap();
        for u in 0..101u64 {
            let expect = if (5..10).contains(&u) { 1.0 } else { 0.0 };
            assert!((xi[u as usize].re - expect).abs() < 1e-12, "u={u}");
        }
    }

    #[test]
    fn xi_squares_hand_count() {
        // q = 11, a = 2, J = 3, α ≡ 1: j ∈ {3,4,5}, j² = {9, 5, 3} mod 11.
        let ctx = prime(11);
        let k = kloosterman(&ctx, 2);
        let cal = Calibration::default();
        let alpha = CoefSeq::ones(3);
        let small = CoefSeq::ones(2);
        let (xi, _, _) = xi_zeta(&ctx, &k, 2, 1, 1, &alpha, &small, &small, &cal).unwrap();
        for u in 0..11u64 {
            let expect = if [9, 5, 3].contains(&u) { 1.0 } else { 0.0 };
            assert!((xi[u as usize].re - expect).abs() < 1e-12, "u={u}");
        }
    }

    #[test]
    fn contraction_identity_on_random_coefficients() {
        // The function asserts the identity internally; exercise it with
        // seed-42 random unit coefficients and negative exponents.
        let ctx = prime(101);
        let k = kloosterman(&ctx, 2);
        let cal = Calibration::default();
        let alpha = CoefSeq::unit_random(6, 42);
        let beta = CoefSeq::unit_random(5, 43);
        let gamma = CoefSeq::unit_random(7, 44);
        let (_, _, rep) =
            xi_zeta(&ctx, &k, 1, 2, -1, &alpha, &beta, &gamma, &cal).unwrap();
        assert!(rep.identity_rel_err < TOL_IDENTITY);
        assert!(rep.xi_l1 <= rep.xi_l1_bound);
        assert!(rep.xi_l2_sq <= rep.xi_l2_bound);
        assert!(rep.zeta_l2_sq <= rep.zeta_l2_bound);
    }
}
