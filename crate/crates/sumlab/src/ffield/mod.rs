//! Arithmetic contexts for `F_q` and `F_{q^n}`, characters, and Gauss sums.
//!
//! A [`PrimeFieldCtx`] precomputes dense discrete-log / exponential tables
//! and root-of-unity caches so character evaluation is a table lookup.
//! [`ExtFieldCtx`] extends the same interface to `F_{q^n}` with elements
//! encoded as base-`q` integers of their coefficient vectors.  Everything
//! downstream is generic over the [`Field`] trait so complete sums and
//! moments run unchanged over extensions.

mod ext;
pub mod poly;

pub use ext::ExtFieldCtx;
pub use poly::{Poly, RationalFn};

use crate::C64;
use thiserror::Error;

/// Soft cap on field size: dense tables of this size are the design limit.
pub const MAX_FIELD: u64 = 1 << 26;

const DLOG_SENTINEL: u32 = u32::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("q = {0} is not prime")]
    NotPrime(u64),
    #[error("q = 2 is excluded; all kernels assume odd characteristic")]
    EvenPrime,
    #[error("field of order {0} exceeds the table cap {MAX_FIELD}")]
    TooLarge(u64),
    #[error("extension degree must be >= 1")]
    BadDegree,
    #[error("rational function with zero denominator")]
    ZeroDenominator,
}

/// Common interface of `F_q` and `F_{q^n}`: element encodings are `u64`
/// in `[0, order)`, with `0` and `1` the additive and multiplicative
/// identities and encodings `< q` forming the prime subfield.
pub trait Field {
    /// Number of elements.
    fn order(&self) -> u64;
    /// Characteristic `q` of the prime subfield.
    fn characteristic(&self) -> u64;
    /// The prime subfield context (roots-of-unity cache lives there).
    fn base(&self) -> &PrimeFieldCtx;

    fn add(&self, a: u64, b: u64) -> u64;
    fn neg(&self, a: u64) -> u64;
    fn mul(&self, a: u64, b: u64) -> u64;
    /// Multiplicative inverse; `inv(0) = 0` by convention (callers handle
    /// poles before inverting).
    fn inv(&self, a: u64) -> u64;
    /// Discrete log to the chosen generator, `None` at 0.
    fn dlog(&self, a: u64) -> Option<u64>;
    /// `generator^k` for `k` reduced mod `order - 1`.
    fn gen_pow(&self, k: u64) -> u64;
    /// Trace to the prime subfield (identity on `F_q` itself).
    fn trace(&self, a: u64) -> u64;
    /// Norm to the prime subfield.
    fn norm(&self, a: u64) -> u64;

    fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    /// Integer power with negative exponents via the inverse; `powi(0, e)`
    /// is 0 for e > 0 and 1 for e = 0 (callers exclude negative-exponent
    /// poles themselves).
    fn powi(&self, a: u64, e: i64) -> u64 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let l = self.order() - 1;
        let k = self.dlog(a).expect("nonzero element has a dlog");
        let e = e.rem_euclid(l as i64) as u64;
        self.gen_pow(k * e % l)
    }

    /// Reduce a signed integer into the prime subfield.
    fn embed_int(&self, m: i64) -> u64 {
        m.rem_euclid(self.characteristic() as i64) as u64
    }

    /// Additive character `ψ_t(x) = e(t·Tr(x)/q)`.
    fn psi(&self, t: u64, x: u64) -> C64 {
        let q = self.characteristic();
        self.base().root_q((t % q) * self.trace(x) % q)
    }

    /// Multiplicative character of base index `j ∈ Z/(q−1)`, evaluated with
    /// the index-scaled convention `χ_j(x) = e(j·dlog(x)/(q−1))`; `χ_j(0)=0`.
    fn chi(&self, j: u64, x: u64) -> C64 {
        match self.dlog(x) {
            None => C64::new(0.0, 0.0),
            Some(k) => {
                let qm1 = self.characteristic() - 1;
                self.base().root_qm1((j % qm1) * (k % qm1) % qm1)
            }
        }
    }
}

/// Precomputed arithmetic context for `F_q`, `q` an odd prime.
#[derive(Debug, Clone)]
pub struct PrimeFieldCtx {
    q: u64,
    g: u64,
    dlog: Vec<u32>,
    expt: Vec<u32>,
    roots_q: Vec<C64>,
    roots_qm1: Vec<C64>,
}

impl PrimeFieldCtx {
    /// Build the context; the generator is the smallest one, so tables are
    /// deterministic across runs.
    pub fn new(q: u64) -> Result<Self, FieldError> {
        if q == 2 {
            return Err(FieldError::EvenPrime);
        }
        if q < 2 || !is_prime(q) {
            return Err(FieldError::NotPrime(q));
        }
        if q > MAX_FIELD {
            return Err(FieldError::TooLarge(q));
        }
        let factors = factorize(q - 1);
        let g = (2..q)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&(p, _)| pow_mod(g, (q - 1) / p, q) != 1)
            })
            .expect("every prime field has a generator");

        let mut expt = vec![0u32; (q - 1) as usize];
        let mut dlog = vec![DLOG_SENTINEL; q as usize];
        let mut x = 1u64;
        for (k, slot) in expt.iter_mut().enumerate() {
            *slot = x as u32;
            dlog[x as usize] = k as u32;
            x = x * g % q;
        }
        debug_assert_eq!(x, 1);

        let roots_q = roots_of_unity(q);
        let roots_qm1 = roots_of_unity(q - 1);
        Ok(PrimeFieldCtx {
            q,
            g,
            dlog,
            expt,
            roots_q,
            roots_qm1,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn generator(&self) -> u64 {
        self.g
    }

    /// `e(j/q)`.
    pub fn root_q(&self, j: u64) -> C64 {
        self.roots_q[(j % self.q) as usize]
    }

    /// `e(j/(q-1))`.
    pub fn root_qm1(&self, j: u64) -> C64 {
        self.roots_qm1[(j % (self.q - 1)) as usize]
    }
}

impl Field for PrimeFieldCtx {
    fn order(&self) -> u64 {
        self.q
    }

    fn characteristic(&self) -> u64 {
        self.q
    }

    fn base(&self) -> &PrimeFieldCtx {
        self
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.q
    }

    fn inv(&self, a: u64) -> u64 {
        if a == 0 {
            return 0;
        }
        let k = self.dlog[a as usize] as u64;
        self.expt[((self.q - 1 - k) % (self.q - 1)) as usize] as u64
    }

    fn dlog(&self, a: u64) -> Option<u64> {
        let k = self.dlog[a as usize];
        (k != DLOG_SENTINEL).then_some(k as u64)
    }

    fn gen_pow(&self, k: u64) -> u64 {
        self.expt[(k % (self.q - 1)) as usize] as u64
    }

    fn trace(&self, a: u64) -> u64 {
        a
    }

    fn norm(&self, a: u64) -> u64 {
        a
    }
}

/// Additive character parameter; evaluate through [`Field::psi`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AddChar {
    pub t: u64,
}

impl AddChar {
    pub fn new(t: u64) -> Self {
        AddChar { t }
    }

    pub fn eval<F: Field>(&self, f: &F, x: u64) -> C64 {
        f.psi(self.t, x)
    }

    pub fn is_trivial<F: Field>(&self, f: &F) -> bool {
        self.t % f.characteristic() == 0
    }
}

/// Multiplicative character indexed by `j ∈ Z/(q−1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultChar {
    pub j: u64,
}

impl MultChar {
    pub fn new(j: u64) -> Self {
        MultChar { j }
    }

    pub fn eval<F: Field>(&self, f: &F, x: u64) -> C64 {
        f.chi(self.j, x)
    }

    /// Order of the character: `(q−1)/gcd(j, q−1)`.
    pub fn order(&self, ctx: &PrimeFieldCtx) -> u64 {
        let qm1 = ctx.q() - 1;
        qm1 / gcd(self.j % qm1, qm1).max(1)
    }

    pub fn is_trivial(&self, ctx: &PrimeFieldCtx) -> bool {
        self.j % (ctx.q() - 1) == 0
    }

    /// The quadratic character (index `(q−1)/2`).
    pub fn quadratic(ctx: &PrimeFieldCtx) -> Self {
        MultChar {
            j: (ctx.q() - 1) / 2,
        }
    }
}

/// `Σ_{x∈F^×} χ(x) ψ(x)`; for nontrivial χ and ψ the modulus is `√|F|`.
pub fn gauss_sum<F: Field>(f: &F, chi: MultChar, psi: AddChar) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for x in 1..f.order() {
        acc += chi.eval(f, x) * psi.eval(f, x);
    }
    acc
}

/// Deterministic trial-division primality test (fields are capped small).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization `n = Π p^e` by trial division.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut push = |p: u64, e: u32| {
        if e > 0 {
            out.push((p, e));
        }
    };
    let mut e = 0;
    while n % 2 == 0 {
        n /= 2;
        e += 1;
    }
    push(2, e);
    let mut d = 3u64;
    while d * d <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        push(d, e);
        d += 2;
    }
    if n > 1 {
        push(n, 1);
    }
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn roots_of_unity(n: u64) -> Vec<C64> {
    use std::f64::consts::TAU;
    (0..n)
        .map(|j| {
            let theta = TAU * j as f64 / n as f64;
            C64::new(theta.cos(), theta.sin())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{TOL_TABLE, TOL_UNIT};

    #[test]
    fn rejects_bad_orders() {
        assert_eq!(PrimeFieldCtx::new(2).unwrap_err(), FieldError::EvenPrime);
        assert_eq!(PrimeFieldCtx::new(9).unwrap_err(), FieldError::NotPrime(9));
        assert_eq!(PrimeFieldCtx::new(1).unwrap_err(), FieldError::NotPrime(1));
    }

    #[test]
    fn smallest_generator_and_tables() {
        // Brute-force oracle: orders of 2..q-1 mod 7 are 3,6,3,6,2 so the
        // smallest generator is 3, and 3^2 = 2.
        let ctx = PrimeFieldCtx::new(7).unwrap();
        assert_eq!(ctx.generator(), 3);
        assert_eq!(ctx.dlog(2), Some(2));

        let ctx3 = PrimeFieldCtx::new(3).unwrap();
        assert_eq!(ctx3.generator(), 2);
        assert_eq!(ctx3.dlog(2), Some(1));
    }

    #[test]
    fn generator_is_smallest_by_order_oracle() {
        for q in [5u64, 11, 13, 101] {
            let ctx = PrimeFieldCtx::new(q).unwrap();
            let order = |g: u64| {
                let mut x = g;
                let mut k = 1;
                while x != 1 {
                    x = x * g % q;
                    k += 1;
                }
                k
            };
            let smallest = (2..q).find(|&g| order(g) == q - 1).unwrap();
            assert_eq!(ctx.generator(), smallest);
        }
    }

    #[test]
    fn table_roundtrip_and_dlog_additivity() {
        for q in [3u64, 7, 101] {
            let ctx = PrimeFieldCtx::new(q).unwrap();
            for x in 1..q {
                assert_eq!(ctx.gen_pow(ctx.dlog(x).unwrap()), x);
            }
            for x in 1..q {
                for y in 1..q {
                    let lhs = ctx.dlog(x * y % q).unwrap();
                    let rhs = (ctx.dlog(x).unwrap() + ctx.dlog(y).unwrap()) % (q - 1);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn roots_are_unit_modulus() {
        let ctx = PrimeFieldCtx::new(101).unwrap();
        for j in 0..101 {
            assert!((ctx.root_q(j).norm() - 1.0).abs() < TOL_UNIT);
        }
        for j in 0..100 {
            assert!((ctx.root_qm1(j).norm() - 1.0).abs() < TOL_UNIT);
        }
    }

    #[test]
    fn characters_are_multiplicative() {
        let ctx = PrimeFieldCtx::new(13).unwrap();
        let psi = AddChar::new(1);
        for x in 0..13u64 {
            for y in 0..13u64 {
                let lhs = psi.eval(&ctx, (x + y) % 13);
                let rhs = psi.eval(&ctx, x) * psi.eval(&ctx, y);
                assert!((lhs - rhs).norm() < 10.0 * TOL_UNIT);
            }
        }
        for j in 0..12u64 {
            let chi = MultChar::new(j);
            for x in 1..13u64 {
                for y in 1..13u64 {
                    let lhs = chi.eval(&ctx, x * y % 13);
                    let rhs = chi.eval(&ctx, x) * chi.eval(&ctx, y);
                    assert!((lhs - rhs).norm() < 10.0 * TOL_UNIT);
                }
            }
            assert_eq!(chi.eval(&ctx, 0), C64::new(0.0, 0.0));
        }
    }

    #[test]
    fn character_orthogonality() {
        for q in [5u64, 31, 101] {
            let ctx = PrimeFieldCtx::new(q).unwrap();
            for j in 0..q - 1 {
                let s: C64 = (1..q).map(|x| ctx.chi(j, x)).sum();
                let expect = if j == 0 { (q - 1) as f64 } else { 0.0 };
                assert!(
                    (s - C64::new(expect, 0.0)).norm() < TOL_TABLE,
                    "q={q} j={j} sum={s}"
                );
            }
        }
    }

    #[test]
    fn gauss_sum_modulus() {
        for q in [5u64, 7, 11, 13] {
            let ctx = PrimeFieldCtx::new(q).unwrap();
            for j in 1..q - 1 {
                for t in 1..q {
                    let tau = gauss_sum(&ctx, MultChar::new(j), AddChar::new(t));
                    assert!(
                        (tau.norm() - (q as f64).sqrt()).abs() < TOL_TABLE,
                        "q={q} j={j} t={t}"
                    );
                }
            }
            // Trivial χ, nontrivial ψ: Σ_{x≠0} ψ(x) = −1.
            let tau = gauss_sum(&ctx, MultChar::new(0), AddChar::new(1));
            assert!((tau - C64::new(-1.0, 0.0)).norm() < TOL_TABLE);
        }
    }

    #[test]
    fn quadratic_gauss_sum_q5() {
        // Direct 4-term oracle at q=5: Σ χ₂(x) e(x/5) with χ₂ = Legendre.
        let ctx = PrimeFieldCtx::new(5).unwrap();
        let chi = MultChar::quadratic(&ctx);
        let mut oracle = C64::new(0.0, 0.0);
        for x in 1..5u64 {
            let legendre = if [1u64, 4].contains(&x) { 1.0 } else { -1.0 };
            oracle += legendre * ctx.root_q(x);
        }
        let tau = gauss_sum(&ctx, chi, AddChar::new(1));
        assert!((tau - oracle).norm() < TOL_TABLE);
        assert!((tau.norm() - 5f64.sqrt()).abs() < TOL_TABLE);
    }

    #[test]
    fn powi_and_inverse() {
        let ctx = PrimeFieldCtx::new(11).unwrap();
        for a in 1..11u64 {
            assert_eq!(ctx.mul(a, ctx.inv(a)), 1);
            assert_eq!(ctx.powi(a, -1), ctx.inv(a));
            assert_eq!(ctx.powi(a, 3), a * a % 11 * a % 11);
            assert_eq!(ctx.powi(a, 0), 1);
        }
        assert_eq!(ctx.powi(0, 5), 0);
    }
}
