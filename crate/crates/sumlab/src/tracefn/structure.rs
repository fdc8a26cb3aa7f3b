//! Structural tests on polynomial data: supermorse and Sidon conditions.
//!
//! A polynomial `f` with `deg f` below the characteristic is *supermorse*
//! when its derivative is squarefree (all critical points simple) and its
//! critical values are pairwise distinct.  The set of critical values is a
//! *Sidon set* when `s₁+s₂ = s₃+s₄` forces `{s₁,s₂} ∩ {s₃,s₄} ≠ ∅`.
//! Critical values may live in an extension; the Sidon test enumerates
//! them in the splitting field of `f′` and gives up (distinctly reported)
//! past the caps.

use super::TraceError;
use crate::ffield::{ExtFieldCtx, Field, Poly, PrimeFieldCtx};

/// Splitting-field degree cap for the Sidon search.
const SPLIT_DEGREE_CAP: u32 = 6;
/// Element-enumeration cap for root finding in the splitting field.
const ENUM_CAP: u64 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SidonStatus {
    Sidon,
    NotSidon,
    /// Splitting field beyond the configured caps; no verdict.
    Unknown,
}

fn check_degree(ctx: &PrimeFieldCtx, f: &Poly) -> Result<(), TraceError> {
    if f.is_constant() {
        return Err(TraceError::TrivialKernel);
    }
    if f.deg_or0() as u64 >= ctx.q() {
        return Err(TraceError::DegreeTooLarge(f.deg_or0(), ctx.q()));
    }
    Ok(())
}

/// Supermorse test: `f′` squarefree and critical values pairwise distinct.
///
/// The critical-value polynomial `R(X) = Res_Y(f′(Y), X − f(Y))` is a
/// scalar multiple of `Π (X − f(y_i))` over the critical points `y_i`, so
/// distinctness of critical values is squarefreeness of `R`.  `R` is
/// computed by interpolation: each evaluation `R(x₀)` is a univariate
/// resultant over `F_q`.
pub fn is_supermorse(ctx: &PrimeFieldCtx, f: &Poly) -> Result<bool, TraceError> {
    check_degree(ctx, f)?;
    let fp = f.derivative(ctx);
    debug_assert!(!fp.is_zero(), "deg f < q keeps the derivative nonzero");
    if fp.is_constant() {
        // No critical points at all (deg f = 1): vacuously supermorse.
        return Ok(true);
    }
    let fpp = fp.derivative(ctx);
    if fp.gcd(ctx, &fpp).degree() != Some(0) {
        return Ok(false);
    }
    let r = critical_value_poly(ctx, f, &fp);
    Ok(r.gcd(ctx, &r.derivative(ctx)).degree() == Some(0))
}

fn critical_value_poly(ctx: &PrimeFieldCtx, f: &Poly, fp: &Poly) -> Poly {
    let d = fp.deg_or0();
    // R has degree exactly deg f′ in X; interpolate through d + 1 points.
    let points: Vec<(u64, u64)> = (0..=d as u64)
        .map(|x0| {
            let shifted = Poly::from_coeffs(ctx, &[x0 as i64]).sub(ctx, f);
            (x0, Poly::resultant(ctx, fp, &shifted))
        })
        .collect();
    Poly::interpolate(ctx, &points)
}

/// Sidon test on the critical values of `f`, enumerated in the splitting
/// field of `f′`.
pub fn sidon_critical_values(ctx: &PrimeFieldCtx, f: &Poly) -> Result<SidonStatus, TraceError> {
    check_degree(ctx, f)?;
    let fp = f.derivative(ctx);
    if fp.is_constant() {
        return Ok(SidonStatus::Sidon); // no critical values at all
    }
    // Radical of f′: roots with multiplicities stripped.
    let radical = fp
        .divrem(ctx, &fp.gcd(ctx, &fp.derivative(ctx)))
        .0
        .monic(ctx);

    let Some(e) = splitting_degree(ctx, &radical) else {
        return Ok(SidonStatus::Unknown);
    };
    if e > SPLIT_DEGREE_CAP || ctx.q().checked_pow(e).map_or(true, |o| o > ENUM_CAP) {
        return Ok(SidonStatus::Unknown);
    }
    let field = match ExtFieldCtx::new(ctx, e) {
        Ok(field) => field,
        Err(_) => return Ok(SidonStatus::Unknown),
    };

    // Critical values f(y) over the roots y of f′ in the splitting field.
    let mut values: Vec<u64> = (0..field.order())
        .filter(|&y| radical.eval_in(&field, y) == 0)
        .map(|y| f.eval_in(&field, y))
        .collect();
    values.sort_unstable();
    values.dedup();

    for (i1, &s1) in values.iter().enumerate() {
        for &s2 in &values[i1..] {
            for (i3, &s3) in values.iter().enumerate() {
                for &s4 in &values[i3..] {
                    if field.add(s1, s2) != field.add(s3, s4) {
                        continue;
                    }
                    let overlap = s1 == s3 || s1 == s4 || s2 == s3 || s2 == s4;
                    if !overlap {
                        return Ok(SidonStatus::NotSidon);
                    }
                }
            }
        }
    }
    Ok(SidonStatus::Sidon)
}

/// Degree of the splitting field of a squarefree polynomial: the lcm of
/// its irreducible-factor degrees, found by distinct-degree factorization.
/// `None` if factor degrees push past the cap.
fn splitting_degree(ctx: &PrimeFieldCtx, squarefree: &Poly) -> Option<u32> {
    let q = ctx.q();
    let mut rest = squarefree.monic(ctx);
    let mut h = Poly::x().rem(ctx, &rest);
    let mut lcm = 1u64;
    let mut i = 0u32;
    while rest.deg_or0() > 0 {
        i += 1;
        if i > rest.deg_or0() as u32 {
            break;
        }
        h = h.powmod(ctx, q, &rest);
        let g = h.sub(ctx, &Poly::x()).gcd(ctx, &rest);
        if g.deg_or0() > 0 {
            lcm = lcm / crate::ffield::gcd(lcm, i as u64) * i as u64;
            rest = rest.divrem(ctx, &g).0;
            h = h.rem(ctx, &rest);
        }
    }
    u32::try_from(lcm).ok()
}
