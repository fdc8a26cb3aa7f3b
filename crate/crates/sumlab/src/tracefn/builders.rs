//! Constructors for the kernel catalog.
//!
//! Kloosterman-type kernels are built by multiplicative convolution in the
//! dlog domain; fiber counts, Fourier phases, and rank-one kernels by
//! direct evaluation.  All kernels use extension by zero at singular
//! points.  Builders that make sense over `F_{q^n}` (Kloosterman, fiber
//! counts, rank-one with index-scaled characters) are generic over
//! [`Field`]; the remaining kernels are prime-field only.

use super::conv::{convolve_all, to_dlog_domain};
use super::{CharMultiset, TraceError, TraceTable};
use crate::ffield::{AddChar, Field, MultChar, Poly, PrimeFieldCtx, RationalFn};
use crate::C64;

/// Common finish: expand a dlog-domain sum, scale by `Q^{-w}`.
fn finish<F: Field>(
    field: &F,
    dlog_sum: &[C64],
    w: f64,
    label: String,
    rank: u32,
    real_valued: bool,
) -> TraceTable {
    let scale = (field.order() as f64).powf(-w);
    let values = super::conv::from_dlog_domain(field, dlog_sum)
        .into_iter()
        .map(|v| v * scale)
        .collect();
    let mut t = TraceTable::new(field.order(), values, label, rank);
    t.norm_exponent = w;
    t.real_valued = real_valued;
    t
}

/// Hyper-Kloosterman kernel `Kl_r(u) = Q^{-(r-1)/2} Σ_{x₁⋯x_r=u} ψ(Σx_i)`,
/// zero at `u = 0`.
pub fn kloosterman<F: Field>(field: &F, r: u32) -> TraceTable {
    assert!(r >= 1, "Kloosterman rank must be at least 1");
    let psi = to_dlog_domain(field, |x| field.psi(1, x));
    let factors = vec![psi; r as usize];
    let conv = convolve_all(&factors);
    // conj(Kl_r(u)) = Kl_r((-1)^r u), so even ranks are real-valued.
    finish(
        field,
        &conv,
        (r as f64 - 1.0) / 2.0,
        format!("kl:{r}"),
        r,
        r % 2 == 0,
    )
}

/// Character-twisted hyper-Kloosterman sum
/// `Q^{-(a-1)/2} Σ_{y₁⋯y_a=u} Πχ_j(y_j) ψ_t(Σy_j)`.
pub fn kloosterman_chars<F: Field>(
    field: &F,
    chars: &CharMultiset,
    psi: AddChar,
) -> Result<TraceTable, TraceError> {
    if chars.is_empty() {
        return Err(TraceError::EmptyParams);
    }
    let factors: Vec<Vec<C64>> = chars
        .indices()
        .iter()
        .map(|&j| to_dlog_domain(field, |x| field.chi(j, x) * psi.eval(field, x)))
        .collect();
    let conv = convolve_all(&factors);
    let a = chars.len() as u32;
    let label = format!(
        "klchars:{}@{}",
        chars
            .indices()
            .iter()
            .map(|j| j.to_string())
            .collect::<Vec<_>>()
            .join(","),
        psi.t
    );
    Ok(finish(field, &conv, (a as f64 - 1.0) / 2.0, label, a, false))
}

/// Hypergeometric sum over the disjoint multisets `χ⃗` (size r) and `ρ⃗`
/// (size t):
/// `Hyp(u) = q^{-(r+t-1)/2} Σ_{(Πx)/(Πy)=u} ψ(Σx−Σy) Πχ_i(x_i) Πρ̄_j(y_j)`
/// with every variable in `F_q^×`.  Substituting `z_j = y_j^{-1}` turns the
/// `y`-side into convolution factors `z ↦ ρ_j(z)ψ(−z^{-1})`.
pub fn hypergeometric(
    ctx: &PrimeFieldCtx,
    chi: &CharMultiset,
    rho: &CharMultiset,
    psi: AddChar,
) -> Result<TraceTable, TraceError> {
    if chi.is_empty() && rho.is_empty() {
        return Err(TraceError::EmptyParams);
    }
    if !chi.is_disjoint_from(rho) {
        return Err(TraceError::NotDisjoint);
    }
    let mut factors: Vec<Vec<C64>> = Vec::new();
    for &j in chi.indices() {
        factors.push(to_dlog_domain(ctx, |x| {
            ctx.chi(j, x) * psi.eval(ctx, x)
        }));
    }
    for &j in rho.indices() {
        factors.push(to_dlog_domain(ctx, |z| {
            ctx.chi(j, z) * psi.eval(ctx, ctx.neg(ctx.inv(z)))
        }));
    }
    let conv = convolve_all(&factors);
    let rt = (chi.len() + rho.len()) as u32;
    let fmt = |m: &CharMultiset| {
        m.indices()
            .iter()
            .map(|j| j.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    let label = format!("hyp:{}|{}@{}", fmt(chi), fmt(rho), psi.t);
    Ok(finish(
        ctx,
        &conv,
        (rt as f64 - 1.0) / 2.0,
        label,
        rt,
        false,
    ))
}

/// Dlog-domain pushforward of `ψ_1` under `x ↦ x^a`.
fn power_pushforward(ctx: &PrimeFieldCtx, a: i64) -> Vec<C64> {
    let l = ctx.q() - 1;
    let am = a.rem_euclid(l as i64) as u64;
    let mut out = vec![C64::new(0.0, 0.0); l as usize];
    for k in 0..l {
        out[(am * k % l) as usize] += ctx.psi(1, ctx.gen_pow(k));
    }
    out
}

/// Toric kernel `K_{a,b,c}(u) = (1/q) Σ_{x^a y^b z^c = u} e((x+y+z)/q)`
/// over `x, y, z ∈ F_q^×`.
pub fn toric_kernel(
    ctx: &PrimeFieldCtx,
    a: i64,
    b: i64,
    c: i64,
) -> Result<TraceTable, TraceError> {
    let q = ctx.q() as i64;
    for e in [a, b, c] {
        if e.rem_euclid(q) == 0 {
            return Err(TraceError::ZeroExponent(e));
        }
    }
    let conv = convolve_all(&[
        power_pushforward(ctx, a),
        power_pushforward(ctx, b),
        power_pushforward(ctx, c),
    ]);
    Ok(finish(ctx, &conv, 1.0, format!("toric:{a},{b},{c}"), 3, false))
}

/// Monomial product sum `H̃_{a⃗}(v) = q^{-(r-1)/2} Σ_{Πx_i^{a_i}=v} ψ(Σx_i)`.
pub fn monomial_product_sum(ctx: &PrimeFieldCtx, a: &[u64]) -> Result<TraceTable, TraceError> {
    if a.is_empty() {
        return Err(TraceError::EmptyParams);
    }
    if a.iter().any(|&ai| ai == 0) {
        return Err(TraceError::ZeroExponent(0));
    }
    let factors: Vec<Vec<C64>> = a
        .iter()
        .map(|&ai| power_pushforward(ctx, ai as i64))
        .collect();
    let conv = convolve_all(&factors);
    let r = a.len() as f64;
    let rank: u64 = a.iter().sum();
    let label = format!(
        "monomial:{}",
        a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
    );
    Ok(finish(ctx, &conv, (r - 1.0) / 2.0, label, rank as u32, false))
}

/// Fiber-count kernel `K(x) = #{y : f(y) = x} − 1`.
pub fn fiber_count<F: Field>(field: &F, f: &Poly) -> Result<TraceTable, TraceError> {
    let q = field.characteristic();
    if f.is_constant() {
        return Err(TraceError::TrivialKernel);
    }
    if f.deg_or0() as u64 >= q {
        return Err(TraceError::DegreeTooLarge(f.deg_or0(), q));
    }
    let mut counts = vec![-1.0f64; field.order() as usize];
    for y in 0..field.order() {
        counts[f.eval_in(field, y) as usize] += 1.0;
    }
    let values = counts.into_iter().map(|c| C64::new(c, 0.0)).collect();
    let mut t = TraceTable::new(
        field.order(),
        values,
        format!("fiber:{}", f.spec_string()),
        (f.deg_or0() as u32).saturating_sub(1).max(1),
    );
    t.real_valued = true;
    Ok(t)
}

/// Polynomial-phase Fourier transform `K(x) = q^{-1/2} Σ_y ψ(x f(y))` on
/// `F_q^×`, with `K(0) = 0`.
pub fn poly_phase_ft(ctx: &PrimeFieldCtx, f: &Poly) -> Result<TraceTable, TraceError> {
    if f.is_constant() {
        return Err(TraceError::TrivialKernel);
    }
    let q = ctx.q();
    let fy: Vec<u64> = (0..q).map(|y| f.eval(ctx, y)).collect();
    let scale = 1.0 / (q as f64).sqrt();
    let mut values = vec![C64::new(0.0, 0.0); q as usize];
    for x in 1..q {
        let mut acc = C64::new(0.0, 0.0);
        for &v in &fy {
            acc += ctx.psi(1, x * v % q);
        }
        values[x as usize] = acc * scale;
    }
    let mut t = TraceTable::new(
        q,
        values,
        format!("ftphase:{}", f.spec_string()),
        (f.deg_or0() as u32).saturating_sub(1).max(1),
    );
    t.norm_exponent = 0.5;
    Ok(t)
}

/// Rank-one kernel `K(x) = χ(f(x)) ψ(g(x))`, zero at poles of `f`, `g` and
/// zeros of `f`.
pub fn rank_one<F: Field>(
    field: &F,
    chi: MultChar,
    f: &RationalFn,
    g: &RationalFn,
) -> Result<TraceTable, TraceError> {
    let trivial_chi = chi.j % (field.characteristic() - 1) == 0;
    if trivial_chi && g.is_constant() {
        return Err(TraceError::TrivialKernel);
    }
    let values = (0..field.order())
        .map(|x| match (f.eval_in(field, x), g.eval_in(field, x)) {
            (Some(fv), Some(gv)) => field.chi(chi.j, fv) * field.psi(1, gv),
            _ => C64::new(0.0, 0.0),
        })
        .collect();
    let label = format!(
        "rank1:{};{}/{};{}/{}",
        chi.j,
        f.num().spec_string(),
        f.den().spec_string(),
        g.num().spec_string(),
        g.den().spec_string()
    );
    Ok(TraceTable::new(field.order(), values, label, 1))
}

/// Fractional-linear pullback `x ↦ K((ax+b)/(cx+d))`, tracking the value at
/// infinity so `pullback(pullback(K, γ), γ^{-1}) = K` exactly.
pub fn pullback<F: Field>(
    field: &F,
    k: &TraceTable,
    gamma: [[i64; 2]; 2],
) -> Result<TraceTable, TraceError> {
    assert_eq!(k.q, field.order(), "table and field must match");
    let [[a, b], [c, d]] = gamma;
    let (a, b, c, d) = (
        field.embed_int(a),
        field.embed_int(b),
        field.embed_int(c),
        field.embed_int(d),
    );
    let det = field.sub(field.mul(a, d), field.mul(b, c));
    if det == 0 {
        return Err(TraceError::SingularMatrix);
    }
    let values = (0..field.order())
        .map(|x| {
            let den = field.add(field.mul(c, x), d);
            if den == 0 {
                k.inf_value
            } else {
                let num = field.add(field.mul(a, x), b);
                k.value(field.mul(num, field.inv(den)))
            }
        })
        .collect();
    let mut t = TraceTable::new(
        field.order(),
        values,
        format!("mob({};{a},{b},{c},{d})", k.label),
        k.rank,
    );
    t.inf_value = if c != 0 {
        k.value(field.mul(a, field.inv(c)))
    } else {
        k.inf_value
    };
    t.norm_exponent = k.norm_exponent;
    t.real_valued = k.real_valued;
    Ok(t)
}

/// Power pullback `x ↦ K(x^c)` with `c` a nonzero integer (negative values
/// via the inverse).
pub fn pullback_power<F: Field>(
    field: &F,
    k: &TraceTable,
    c: i64,
) -> Result<TraceTable, TraceError> {
    assert_eq!(k.q, field.order(), "table and field must match");
    if c == 0 {
        return Err(TraceError::ZeroExponent(0));
    }
    let values = (0..field.order())
        .map(|x| {
            if x == 0 {
                if c > 0 {
                    k.value(0)
                } else {
                    k.inf_value
                }
            } else {
                k.value(field.powi(x, c))
            }
        })
        .collect();
    let mut t = TraceTable::new(
        field.order(),
        values,
        format!("pow({};{c})", k.label),
        k.rank,
    );
    t.inf_value = if c > 0 { k.inf_value } else { k.value(0) };
    t.norm_exponent = k.norm_exponent;
    t.real_valued = k.real_valued;
    Ok(t)
}

/// Kummer-induction test: the multiset is invariant under twisting by a
/// character of exact order `d` for some divisor `d > 1` of its size.
/// Twisting by `η` of order `d` shifts every index by `(q−1)/d`, so the
/// test is index arithmetic.  Returns the smallest witness divisor.
pub fn is_kummer_induced(ctx: &PrimeFieldCtx, chars: &CharMultiset) -> Option<u64> {
    let r = chars.len() as u64;
    let qm1 = ctx.q() - 1;
    (2..=r)
        .filter(|d| r % d == 0 && qm1 % d == 0)
        .find(|&d| chars.shifted(qm1, qm1 / d) == *chars)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::ExtFieldCtx;
    use crate::TOL_TABLE;

    fn prime(q: u64) -> PrimeFieldCtx {
        PrimeFieldCtx::new(q).unwrap()
    }

    /// Nested-loop oracle for Kl_r, r ≤ 3.
    fn kl_oracle(ctx: &PrimeFieldCtx, r: u32, u: u64) -> C64 {
        let q = ctx.q();
        let mut acc = C64::new(0.0, 0.0);
        match r {
            1 => acc = ctx.psi(1, u),
            2 => {
                for x in 1..q {
                    let y = u * ctx.inv(x) % q;
                    if y == 0 {
                        continue;
                    }
                    acc += ctx.psi(1, (x + y) % q);
                }
            }
            3 => {
                for x in 1..q {
                    for y in 1..q {
                        let z = u * ctx.inv(x * y % q) % q;
                        if z == 0 {
                            continue;
                        }
                        acc += ctx.psi(1, (x + y + z) % q);
                    }
                }
            }
            _ => unreachable!(),
        }
        acc * (q as f64).powf(-((r as f64) - 1.0) / 2.0)
    }

    #[test]
    fn kloosterman_matches_oracle() {
        for q in [5u64, 7, 11, 13] {
            let ctx = prime(q);
            for r in 1..=3u32 {
                let t = kloosterman(&ctx, r);
                assert_eq!(t.value(0), C64::new(0.0, 0.0));
                for u in 1..q {
                    let o = kl_oracle(&ctx, r, u);
                    assert!(
                        (t.value(u) - o).norm() < TOL_TABLE,
                        "q={q} r={r} u={u}: {} vs {o}",
                        t.value(u)
                    );
                }
            }
        }
    }

    #[test]
    fn kloosterman_rank_one_is_additive_character() {
        let ctx = prime(5);
        let t = kloosterman(&ctx, 1);
        for u in 1..5u64 {
            assert!((t.value(u) - ctx.root_q(u)).norm() < TOL_TABLE);
        }
    }

    #[test]
    fn kl2_is_real() {
        let ctx = prime(7);
        let t = kloosterman(&ctx, 2);
        assert!(t.real_valued);
        assert!(t.max_imag() < TOL_TABLE);
    }

    #[test]
    fn conjugation_symmetry() {
        // conj(Kl_r(u)) = Kl_r((-1)^r u), exact identity of the sum.
        for q in [7u64, 101] {
            let ctx = prime(q);
            for r in 1..=3u32 {
                let t = kloosterman(&ctx, r);
                let sign = if r % 2 == 0 { 1 } else { q - 1 };
                for u in 0..q {
                    let lhs = t.value(u).conj();
                    let rhs = t.value(sign * u % q);
                    assert!((lhs - rhs).norm() < TOL_TABLE, "q={q} r={r} u={u}");
                }
            }
        }
    }

    #[test]
    fn parseval_mass() {
        // Σ_{u≠0} |Kl_r(u)|² = q + O(r²√q) with calibration constant 5.
        for q in [101u64, 211] {
            let ctx = prime(q);
            for r in [2u32, 3] {
                let t = kloosterman(&ctx, r);
                let mass: f64 = (1..q).map(|u| t.value(u).norm_sqr()).sum();
                let slack = (r * r) as f64 * (q as f64).sqrt() * 5.0;
                assert!(
                    (mass - q as f64).abs() <= slack,
                    "q={q} r={r} mass={mass}"
                );
            }
        }
    }

    #[test]
    fn purity_cap_holds_for_kl2() {
        let ctx = prime(101);
        let t = kloosterman(&ctx, 2);
        assert!(t.purity_violations().is_empty());
        assert!(t.sup_norm() <= 2.0 + 1e-9);
    }

    #[test]
    fn kloosterman_chars_reduces_and_matches_oracle() {
        let ctx = prime(7);
        let trivial = CharMultiset::new(6, &[0, 0]);
        let t = kloosterman_chars(&ctx, &trivial, AddChar::new(1)).unwrap();
        let kl = kloosterman(&ctx, 2);
        for u in 0..7u64 {
            assert!((t.value(u) - kl.value(u)).norm() < TOL_TABLE);
        }

        // a=2, chars={quadratic, trivial}, q=5: direct double loop.
        let ctx5 = prime(5);
        let chars = CharMultiset::new(4, &[2, 0]);
        let t = kloosterman_chars(&ctx5, &chars, AddChar::new(1)).unwrap();
        for u in 1..5u64 {
            let mut oracle = C64::new(0.0, 0.0);
            for y1 in 1..5u64 {
                let y2 = u * ctx5.inv(y1) % 5;
                // sorted index order (0, 2): χ_0(y1)·χ_2(y2)
                oracle += ctx5.chi(0, y1) * ctx5.chi(2, y2) * ctx5.psi(1, (y1 + y2) % 5);
            }
            oracle *= (5f64).powf(-0.5);
            assert!((t.value(u) - oracle).norm() < TOL_TABLE, "u={u}");
        }
    }

    #[test]
    fn kloosterman_chars_single_factor() {
        let ctx = prime(7);
        let chars = CharMultiset::new(6, &[1]);
        let t = kloosterman_chars(&ctx, &chars, AddChar::new(1)).unwrap();
        for u in 1..7u64 {
            let expect = ctx.chi(1, u) * ctx.psi(1, u);
            assert!((t.value(u) - expect).norm() < TOL_TABLE);
        }
    }

    #[test]
    fn hypergeometric_degenerate_cases() {
        let ctx = prime(7);
        // (r,t)=(1,0), trivial χ: e(u/7) on F_q^×.
        let t = hypergeometric(
            &ctx,
            &CharMultiset::new(6, &[0]),
            &CharMultiset::new(6, &[]),
            AddChar::new(1),
        )
        .unwrap();
        for u in 1..7u64 {
            assert!((t.value(u) - ctx.root_q(u)).norm() < TOL_TABLE);
        }
        // t=0 reduces to kloosterman_chars for several character sets.
        for q in [7u64, 13] {
            let ctx = prime(q);
            for idx in [vec![0u64, 1], vec![2, 0, 1]] {
                let chars = CharMultiset::new(q - 1, &idx);
                let h = hypergeometric(
                    &ctx,
                    &chars,
                    &CharMultiset::new(q - 1, &[]),
                    AddChar::new(1),
                )
                .unwrap();
                let k = kloosterman_chars(&ctx, &chars, AddChar::new(1)).unwrap();
                for u in 0..q {
                    assert!((h.value(u) - k.value(u)).norm() < TOL_TABLE);
                }
            }
        }
    }

    #[test]
    fn hypergeometric_two_sided_oracle() {
        // (r,t)=(1,1), χ=quadratic, ρ=trivial, q=5: 16-term enumeration of
        // Σ_{x/y=u} ψ(x−y) χ(x) conj(ρ(y)).
        let ctx = prime(5);
        let chi = CharMultiset::new(4, &[2]);
        let rho = CharMultiset::new(4, &[0]);
        let t = hypergeometric(&ctx, &chi, &rho, AddChar::new(1)).unwrap();
        for u in 1..5u64 {
            let mut oracle = C64::new(0.0, 0.0);
            for x in 1..5u64 {
                for y in 1..5u64 {
                    if x * ctx.inv(y) % 5 != u {
                        continue;
                    }
                    oracle += ctx.psi(1, ctx.sub(x, y)) * ctx.chi(2, x) * ctx.chi(0, y).conj();
                }
            }
            oracle *= (5f64).powf(-0.5);
            assert!((t.value(u) - oracle).norm() < TOL_TABLE, "u={u}");
        }
        assert_eq!(t.value(0), C64::new(0.0, 0.0));
    }

    #[test]
    fn hypergeometric_rejects_overlap() {
        let ctx = prime(7);
        let chi = CharMultiset::new(6, &[1, 2]);
        let rho = CharMultiset::new(6, &[2]);
        assert_eq!(
            hypergeometric(&ctx, &chi, &rho, AddChar::new(1)).unwrap_err(),
            TraceError::NotDisjoint
        );
    }

    #[test]
    fn toric_identity_and_oracle() {
        // (1,1,1) matches Kl_3 (normalizations coincide: 1/q = q^{-(3-1)/2}).
        let ctx = prime(7);
        let t = toric_kernel(&ctx, 1, 1, 1).unwrap();
        let k = kloosterman(&ctx, 3);
        for u in 0..7u64 {
            assert!((t.value(u) - k.value(u)).norm() < TOL_TABLE);
        }

        // Direct triple loop for (1,1,2) and (2,3,1) at q=5.
        let ctx5 = prime(5);
        for (a, b, c) in [(1i64, 1, 2), (2, 3, 1)] {
            let t = toric_kernel(&ctx5, a, b, c).unwrap();
            for u in 1..5u64 {
                let mut oracle = C64::new(0.0, 0.0);
                for x in 1..5u64 {
                    for y in 1..5u64 {
                        for z in 1..5u64 {
                            let m = ctx5.mul(
                                ctx5.powi(x, a),
                                ctx5.mul(ctx5.powi(y, b), ctx5.powi(z, c)),
                            );
                            if m == u {
                                oracle += ctx5.psi(1, (x + y + z) % 5);
                            }
                        }
                    }
                }
                oracle /= 5.0;
                assert!((t.value(u) - oracle).norm() < TOL_TABLE, "u={u}");
            }
        }
    }

    #[test]
    fn toric_rejects_vanishing_exponent() {
        let ctx = prime(5);
        assert_eq!(
            toric_kernel(&ctx, 5, 1, 1).unwrap_err(),
            TraceError::ZeroExponent(5)
        );
    }

    #[test]
    fn monomial_product_matches_oracle() {
        let ctx = prime(7);
        // a⃗ = (1): e(v/7) on units; a⃗ = (1,1): Kl_2.
        let t1 = monomial_product_sum(&ctx, &[1]).unwrap();
        for v in 1..7u64 {
            assert!((t1.value(v) - ctx.root_q(v)).norm() < TOL_TABLE);
        }
        let t2 = monomial_product_sum(&ctx, &[1, 1]).unwrap();
        let kl = kloosterman(&ctx, 2);
        for v in 0..7u64 {
            assert!((t2.value(v) - kl.value(v)).norm() < TOL_TABLE);
        }

        // a⃗=(2,1), q=5: 16-term oracle.
        let ctx5 = prime(5);
        let t = monomial_product_sum(&ctx5, &[2, 1]).unwrap();
        for v in 1..5u64 {
            let mut oracle = C64::new(0.0, 0.0);
            for x1 in 1..5u64 {
                for x2 in 1..5u64 {
                    if x1 * x1 % 5 * x2 % 5 == v {
                        oracle += ctx5.psi(1, (x1 + x2) % 5);
                    }
                }
            }
            oracle *= (5f64).powf(-0.5);
            assert!((t.value(v) - oracle).norm() < TOL_TABLE, "v={v}");
        }
    }

    #[test]
    fn fiber_count_examples() {
        let ctx = prime(7);
        // f = X²: K(x) = Legendre(x|7) away from 0.
        let t = fiber_count(&ctx, &Poly::from_coeffs(&ctx, &[0, 0, 1])).unwrap();
        let squares = [1u64, 2, 4];
        for x in 1..7u64 {
            let expect = if squares.contains(&x) { 1.0 } else { -1.0 };
            assert_eq!(t.value(x), C64::new(expect, 0.0));
        }
        assert_eq!(t.value(0), C64::new(0.0, 0.0));
        let total: C64 = t.values.iter().sum();
        assert_eq!(total, C64::new(0.0, 0.0));

        // f = X: identically zero.
        let t = fiber_count(&ctx, &Poly::x()).unwrap();
        assert!(t.values.iter().all(|&v| v == C64::new(0.0, 0.0)));

        // f = X³ - 3X at q=11: direct 11-point count.
        let ctx11 = prime(11);
        let f = Poly::from_coeffs(&ctx11, &[0, -3, 0, 1]);
        let t = fiber_count(&ctx11, &f).unwrap();
        for x in 0..11u64 {
            let count = (0..11u64).filter(|&y| f.eval(&ctx11, y) == x).count() as f64;
            assert_eq!(t.value(x), C64::new(count - 1.0, 0.0));
        }
    }

    #[test]
    fn poly_phase_examples() {
        let ctx = prime(7);
        // f = X: complete additive character sum vanishes on units.
        let t = poly_phase_ft(&ctx, &Poly::x()).unwrap();
        for x in 1..7u64 {
            assert!(t.value(x).norm() < TOL_TABLE);
        }
        // f = X²: quadratic Gauss sum modulus 1 after normalization.
        let t = poly_phase_ft(&ctx, &Poly::from_coeffs(&ctx, &[0, 0, 1])).unwrap();
        for x in 1..7u64 {
            assert!((t.value(x).norm() - 1.0).abs() < TOL_TABLE);
        }
        // f = X³: direct 7-term oracle at every point.
        let f = Poly::from_coeffs(&ctx, &[0, 0, 0, 1]);
        let t = poly_phase_ft(&ctx, &f).unwrap();
        for x in 1..7u64 {
            let mut oracle = C64::new(0.0, 0.0);
            for y in 0..7u64 {
                oracle += ctx.psi(1, x * f.eval(&ctx, y) % 7);
            }
            oracle *= (7f64).powf(-0.5);
            assert!((t.value(x) - oracle).norm() < TOL_TABLE);
        }
        assert_eq!(t.value(0), C64::new(0.0, 0.0));
    }

    #[test]
    fn rank_one_examples() {
        let ctx = prime(7);
        // Legendre table: χ quadratic, f = X, g = 0.
        let t = rank_one(
            &ctx,
            MultChar::quadratic(&ctx),
            &RationalFn::from_poly(Poly::x()),
            &RationalFn::from_poly(Poly::zero()),
        )
        .unwrap();
        let squares = [1u64, 2, 4];
        for x in 1..7u64 {
            let expect = if squares.contains(&x) { 1.0 } else { -1.0 };
            assert!((t.value(x) - C64::new(expect, 0.0)).norm() < TOL_TABLE);
        }
        assert_eq!(t.value(0), C64::new(0.0, 0.0));

        // Trivial χ, g = 1/X: e(x̄/7) with 0 at the pole.
        let g = RationalFn::new(&ctx, Poly::one(), Poly::x()).unwrap();
        let t = rank_one(
            &ctx,
            MultChar::new(0),
            &RationalFn::from_poly(Poly::one()),
            &g,
        )
        .unwrap();
        assert_eq!(t.value(0), C64::new(0.0, 0.0));
        for x in 1..7u64 {
            assert!((t.value(x) - ctx.root_q(ctx.inv(x))).norm() < TOL_TABLE);
        }

        // Product-of-lookups oracle: χ of order 3, f = X+1, g = X².
        let chi3 = MultChar::new(2); // order 6/gcd(2,6) = 3
        assert_eq!(chi3.order(&ctx), 3);
        let t = rank_one(
            &ctx,
            chi3,
            &RationalFn::from_poly(Poly::from_coeffs(&ctx, &[1, 1])),
            &RationalFn::from_poly(Poly::from_coeffs(&ctx, &[0, 0, 1])),
        )
        .unwrap();
        let x = 2u64;
        let expect = ctx.chi(2, 3) * ctx.psi(1, 4);
        assert!((t.value(x) - expect).norm() < TOL_TABLE);
    }

    #[test]
    fn rank_one_rejects_trivial() {
        let ctx = prime(7);
        assert_eq!(
            rank_one(
                &ctx,
                MultChar::new(0),
                &RationalFn::from_poly(Poly::x()),
                &RationalFn::from_poly(Poly::one()),
            )
            .unwrap_err(),
            TraceError::TrivialKernel
        );
    }

    #[test]
    fn pullback_identity_translation_roundtrip() {
        let ctx = prime(7);
        let k = kloosterman(&ctx, 2);

        // Identity matrix: same table.
        let t = pullback(&ctx, &k, [[1, 0], [0, 1]]).unwrap();
        assert_eq!(t.values, k.values);

        // Translation by h: index shift.
        let t = pullback(&ctx, &k, [[1, 3], [0, 1]]).unwrap();
        for x in 0..7u64 {
            assert_eq!(t.value(x), k.value((x + 3) % 7));
        }

        // Round trip through a matrix with a genuine pole.
        let gamma = [[1i64, 2], [1, 1]]; // det = -1
        let inv = [[1i64, -2], [-1, 1]]; // adjugate (det 1·inverse works projectively)
        let once = pullback(&ctx, &k, gamma).unwrap();
        let back = pullback(&ctx, &once, inv).unwrap();
        assert_eq!(back.values, k.values);
        assert_eq!(back.inf_value, k.inf_value);

        // Singular matrix rejected.
        assert_eq!(
            pullback(&ctx, &k, [[2, 4], [1, 2]]).unwrap_err(),
            TraceError::SingularMatrix
        );
    }

    #[test]
    fn pullback_power_squares() {
        let ctx = prime(7);
        let k = kloosterman(&ctx, 2);
        let t = pullback_power(&ctx, &k, 2).unwrap();
        assert_eq!(t.value(3), k.value(2)); // 3² = 2 mod 7
        let tinv = pullback_power(&ctx, &k, -1).unwrap();
        for x in 1..7u64 {
            assert_eq!(tinv.value(x), k.value(ctx.inv(x)));
        }
        assert_eq!(
            pullback_power(&ctx, &k, 0).unwrap_err(),
            TraceError::ZeroExponent(0)
        );
    }

    #[test]
    fn kummer_induction_cases() {
        let ctx = prime(7);
        // Full coset of order-dividing-2 characters: induced with d = 2.
        let coset = CharMultiset::new(6, &[0, 3]);
        assert_eq!(is_kummer_induced(&ctx, &coset), Some(2));
        // Singleton: no divisor d > 1 of r = 1.
        assert_eq!(is_kummer_induced(&ctx, &CharMultiset::new(6, &[0])), None);
        // {0, 1}: exhaustive divisor check fails.
        assert_eq!(
            is_kummer_induced(&ctx, &CharMultiset::new(6, &[0, 1])),
            None
        );
    }

    #[test]
    fn kloosterman_over_extension_matches_oracle() {
        // Kl_2 over F_25: direct 24-term oracle per point.
        let base = prime(5);
        let f = ExtFieldCtx::new(&base, 2).unwrap();
        let t = kloosterman(&f, 2);
        for u in 0..25u64 {
            let mut oracle = C64::new(0.0, 0.0);
            for x in 1..25u64 {
                let y = f.mul(u, f.inv(x));
                if y == 0 {
                    continue;
                }
                oracle += f.psi(1, f.add(x, y));
            }
            oracle *= (25f64).powf(-0.5);
            assert!((t.value(u) - oracle).norm() < TOL_TABLE, "u={u}");
        }
    }
}
