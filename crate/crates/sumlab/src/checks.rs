//! Named self-tests shared between the unit-test suite and the CLI
//! `selftest` command.
//!
//! Each check re-verifies one load-bearing identity at small size from
//! scratch (independent of the code paths it cross-checks where
//! possible) and returns a one-line detail string.

use crate::bilinear::{self, CoefSeq};
use crate::complete::{self, TupleParams};
use crate::config::Calibration;
use crate::ffield::{gauss_sum, AddChar, Field, MultChar, PrimeFieldCtx};
use crate::goursat;
use crate::tracefn::{builders, conv, KernelSpec};
use crate::{C64, TOL_IDENTITY, TOL_TABLE};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &'static str, result: Result<String, String>) -> CheckOutcome {
    match result {
        Ok(detail) => CheckOutcome {
            name,
            passed: true,
            detail,
        },
        Err(detail) => CheckOutcome {
            name,
            passed: false,
            detail,
        },
    }
}

fn check_field_inverses() -> Result<String, String> {
    let ctx = PrimeFieldCtx::new(101).map_err(|e| e.to_string())?;
    for a in 1..101 {
        if ctx.mul(a, ctx.inv(a)) != 1 {
            return Err(format!("a·a⁻¹ ≠ 1 at a = {a}"));
        }
        if ctx.powi(a, 100) != 1 {
            return Err(format!("a^(q−1) ≠ 1 at a = {a}"));
        }
    }
    Ok("inverses and Fermat exponent verified on all 100 units of F_101".into())
}

fn check_gauss_modulus() -> Result<String, String> {
    let ctx = PrimeFieldCtx::new(101).map_err(|e| e.to_string())?;
    let psi = AddChar::new(1);
    for j in 1..=5 {
        let g = gauss_sum(&ctx, MultChar::new(j), psi);
        let err = (g.norm() - (101f64).sqrt()).abs();
        if err > 1e-8 {
            return Err(format!("|G(χ_{j}, ψ)| off by {err:.2e}"));
        }
    }
    Ok("|G(χ, ψ)| = √q for five nontrivial characters mod 101".into())
}

fn check_kloosterman_purity() -> Result<String, String> {
    let ctx = PrimeFieldCtx::new(101).map_err(|e| e.to_string())?;
    let k = builders::kloosterman(&ctx, 2);
    if k.sup_norm() > 2.0 + 1e-9 {
        return Err(format!("sup norm {} exceeds the Weil bound 2", k.sup_norm()));
    }
    let bad = k.purity_violations();
    if !bad.is_empty() {
        return Err(format!("{} purity violations", bad.len()));
    }
    if k.max_imag() > TOL_TABLE {
        return Err(format!("imaginary part {:.2e}", k.max_imag()));
    }
    Ok("Kl₂ mod 101 is real, pure of weight 1, and Weil-bounded".into())
}

fn check_convolution() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let n = 97;
    let a: Vec<C64> = (0..n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let b: Vec<C64> = (0..n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let fast = conv::cyclic_convolve(&a, &b);
    // Independent nested-loop oracle.
    let mut worst = 0.0f64;
    for i in 0..n {
        let mut s = C64::new(0.0, 0.0);
        for j in 0..n {
            s += a[j] * b[(i + n - j) % n];
        }
        worst = worst.max((s - fast[i]).norm());
    }
    if worst > TOL_TABLE {
        return Err(format!("convolution mismatch {worst:.2e}"));
    }
    Ok(format!(
        "cyclic convolution matches the O(n²) oracle to {worst:.1e} at n = {n}"
    ))
}

fn check_sigma_ii_decomposition() -> Result<String, String> {
    let ctx = PrimeFieldCtx::new(11).map_err(|e| e.to_string())?;
    let k = builders::kloosterman(&ctx, 2);
    let p = TupleParams::new(2, 1, 2, vec![1, 3, 4, 9]).map_err(|e| e.to_string())?;
    let fast = complete::sigma_ii(&ctx, &k, &p);
    let direct = complete::sigma_ii_direct(&ctx, &k, &p);
    let err = crate::rel_err(fast, direct);
    if err > TOL_IDENTITY {
        return Err(format!("Σ_II decomposition off by {err:.2e}"));
    }
    Ok(format!("Σ_II decomposition matches the triple loop to {err:.1e}"))
}

fn check_moment_exchange() -> Result<String, String> {
    let ctx = PrimeFieldCtx::new(5).map_err(|e| e.to_string())?;
    let spec = KernelSpec::Kloosterman { r: 2 };
    let rep = complete::moment_sigma_i(&ctx, &spec, 1, 1, 1, 1).map_err(|e| e.to_string())?;
    if !complete::moment_identity_holds(&rep) {
        return Err(format!("exchange identity off by {:.2e}", rep.rel_err));
    }
    Ok(format!(
        "moment exchange identity holds to {:.1e} at q = 5, l = m = 1",
        rep.rel_err
    ))
}

fn check_trilinear_contraction() -> Result<String, String> {
    let ctx = PrimeFieldCtx::new(101).map_err(|e| e.to_string())?;
    let k = builders::kloosterman(&ctx, 2);
    let cal = Calibration::default();
    let alpha = CoefSeq::unit_random(6, 7);
    let beta = CoefSeq::unit_random(5, 8);
    let gamma = CoefSeq::signs(4, 9);
    let (_, _, rep) = bilinear::xi_zeta(&ctx, &k, 1, 1, -1, &alpha, &beta, &gamma, &cal)
        .map_err(|e| e.to_string())?;
    if rep.identity_rel_err > TOL_IDENTITY {
        return Err(format!("contraction off by {:.2e}", rep.identity_rel_err));
    }
    Ok(format!(
        "ξ/ζ contraction matches the direct trilinear sum to {:.1e}",
        rep.identity_rel_err
    ))
}

fn check_nu_mass() -> Result<String, String> {
    let ctx = PrimeFieldCtx::new(101).map_err(|e| e.to_string())?;
    let cal = Calibration::default();
    let (_, rep) = bilinear::nu_table(&ctx, 1, 1, &CoefSeq::ones(10), 10, 2, 1, &cal)
        .map_err(|e| e.to_string())?;
    // Every (u, m, n) triple contributes weight 1: mass = U·M·N = 200.
    if (rep.l1 - 200.0).abs() > 1e-9 {
        return Err(format!("ν mass {} ≠ 200", rep.l1));
    }
    if rep.l1 > rep.l1_bound {
        return Err(format!("‖ν‖₁ = {} exceeds its bound {}", rep.l1, rep.l1_bound));
    }
    Ok("‖ν‖₁ = U·M·N = 200 exactly and sits under its bound".into())
}

fn check_opnorm() -> Result<String, String> {
    let ctx = PrimeFieldCtx::new(101).map_err(|e| e.to_string())?;
    let k = builders::kloosterman(&ctx, 2);
    let rep =
        bilinear::operator_norm(&ctx, &k, 1, 1, 10, 10, 80, 1).map_err(|e| e.to_string())?;
    if !rep.converged {
        return Err("power iteration seeds disagree".into());
    }
    if rep.ratio > 1.0 + 1e-9 {
        return Err(format!("σ_max exceeds the trivial bound (ratio {})", rep.ratio));
    }
    Ok(format!(
        "operator norm converged from two seeds; σ_max/trivial = {:.3}",
        rep.ratio
    ))
}

fn check_goursat() -> Result<String, String> {
    let cert = goursat::certificate("sl2_5").map_err(|e| e.to_string())?;
    if !(cert.perfect && cert.quasisimple && !cert.simple && cert.center_order == 2) {
        return Err(format!("SL₂(F₅) certificate wrong: {cert:?}"));
    }
    if cert.coinvariant_dims.iter().any(|(_, d)| *d != 1) {
        return Err(format!(
            "Schur coinvariant dims {:?} ≠ 1",
            cert.coinvariant_dims
        ));
    }
    let a5 = goursat::certificate("a5").map_err(|e| e.to_string())?;
    if !a5.simple || a5.order != 60 {
        return Err("A₅ certificate wrong".into());
    }
    Ok("SL₂(F₅) quasisimple with Schur dims 1; A₅ simple of order 60".into())
}

fn check_survey_reproducibility() -> Result<String, String> {
    let ctx = PrimeFieldCtx::new(101).map_err(|e| e.to_string())?;
    let k = builders::kloosterman(&ctx, 2);
    let cal = Calibration::default();
    let a = complete::diagonal_survey(&ctx, &k, 2, 1, 20, 20, 5, &cal);
    let b = complete::diagonal_survey(&ctx, &k, 2, 1, 20, 20, 5, &cal);
    let same = a.rows.len() == b.rows.len()
        && a.rows
            .iter()
            .zip(&b.rows)
            .all(|(x, y)| x.v == y.v && x.value == y.value);
    if !same {
        return Err("same seed produced different surveys".into());
    }
    Ok("seeded survey is bitwise reproducible across runs".into())
}

/// Run every named check in a fixed order.
pub fn run_all() -> Vec<CheckOutcome> {
    vec![
        outcome("field-inverses", check_field_inverses()),
        outcome("gauss-modulus", check_gauss_modulus()),
        outcome("kloosterman-purity", check_kloosterman_purity()),
        outcome("convolution-oracle", check_convolution()),
        outcome("sigma2-decomposition", check_sigma_ii_decomposition()),
        outcome("moment-exchange", check_moment_exchange()),
        outcome("trilinear-contraction", check_trilinear_contraction()),
        outcome("nu-mass", check_nu_mass()),
        outcome("operator-norm", check_opnorm()),
        outcome("goursat-certificates", check_goursat()),
        outcome("survey-reproducibility", check_survey_reproducibility()),
    ]
}

pub fn all_passed(outcomes: &[CheckOutcome]) -> bool {
    outcomes.iter().all(|o| o.passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_named_check_passes() {
        let outcomes = run_all();
        for o in &outcomes {
            assert!(o.passed, "{} failed: {}", o.name, o.detail);
        }
        assert_eq!(outcomes.len(), 11);
    }
}
