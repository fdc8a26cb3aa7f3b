//! Dense univariate polynomials and rational functions over `F_q`.
//!
//! Coefficients are stored low degree first and always normalized (no
//! trailing zeros); the zero polynomial has an empty coefficient vector.
//! All arithmetic takes the owning [`PrimeFieldCtx`] explicitly so that
//! polynomials stay plain data.

use super::{Field, PrimeFieldCtx};

/// Polynomial over `F_q`, coefficients low degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }

    pub fn constant(ctx: &PrimeFieldCtx, c: u64) -> Self {
        Poly::from_coeffs(ctx, &[c as i64])
    }

    /// The monomial `X`.
    pub fn x() -> Self {
        Poly { coeffs: vec![0, 1] }
    }

    /// `X^k`.
    pub fn x_pow(k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        Poly { coeffs }
    }

    /// Build from signed integer coefficients, reducing mod q.
    pub fn from_coeffs(ctx: &PrimeFieldCtx, coeffs: &[i64]) -> Self {
        let q = ctx.q() as i64;
        let mut c: Vec<u64> = coeffs.iter().map(|&a| a.rem_euclid(q) as u64).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { coeffs: c }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the convention `deg 0 = 0`, convenient for caps.
    pub fn deg_or0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> u64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    fn normalize(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn add(&self, ctx: &PrimeFieldCtx, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, slot) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *slot = ctx.add(a, b);
        }
        Poly::normalize(out)
    }

    pub fn sub(&self, ctx: &PrimeFieldCtx, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, slot) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *slot = ctx.sub(a, b);
        }
        Poly::normalize(out)
    }

    pub fn neg(&self, ctx: &PrimeFieldCtx) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|&a| ctx.neg(a)).collect(),
        }
    }

    pub fn scale(&self, ctx: &PrimeFieldCtx, s: u64) -> Poly {
        if s == 0 {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|&a| ctx.mul(a, s)).collect(),
        }
    }

    pub fn mul(&self, ctx: &PrimeFieldCtx, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(a, b));
            }
        }
        Poly::normalize(out)
    }

    pub fn pow(&self, ctx: &PrimeFieldCtx, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(ctx, &base);
            }
            base = base.mul(ctx, &base);
            e >>= 1;
        }
        acc
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn divrem(&self, ctx: &PrimeFieldCtx, div: &Poly) -> (Poly, Poly) {
        assert!(!div.is_zero(), "division by zero polynomial");
        let dd = div.degree().unwrap();
        if self.coeffs.len() < div.coeffs.len() {
            return (Poly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quo = vec![0u64; rem.len() - dd];
        let lc_inv = ctx.inv(div.leading());
        for i in (dd..rem.len()).rev() {
            let c = ctx.mul(rem[i], lc_inv);
            if c == 0 {
                continue;
            }
            quo[i - dd] = c;
            for (j, &b) in div.coeffs.iter().enumerate() {
                rem[i - dd + j] = ctx.sub(rem[i - dd + j], ctx.mul(c, b));
            }
        }
        (Poly::normalize(quo), Poly::normalize(rem))
    }

    pub fn rem(&self, ctx: &PrimeFieldCtx, div: &Poly) -> Poly {
        self.divrem(ctx, div).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, ctx: &PrimeFieldCtx, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(ctx, &b);
            a = b;
            b = r;
        }
        a.monic(ctx)
    }

    /// Scale to leading coefficient 1 (zero stays zero).
    pub fn monic(&self, ctx: &PrimeFieldCtx) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(ctx, ctx.inv(self.leading()))
    }

    pub fn derivative(&self, ctx: &PrimeFieldCtx) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let out: Vec<u64> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| ctx.mul(a, (i as u64) % ctx.q()))
            .collect();
        Poly::normalize(out)
    }

    /// Horner evaluation at a base-field point.
    pub fn eval(&self, ctx: &PrimeFieldCtx, x: u64) -> u64 {
        self.eval_in(ctx, x)
    }

    /// Horner evaluation in any extension of the coefficient field; base
    /// coefficients embed as constant-polynomial encodings.
    pub fn eval_in<F: Field>(&self, f: &F, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }

    /// Substitute another polynomial for `X`.
    pub fn compose(&self, ctx: &PrimeFieldCtx, inner: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(ctx, inner).add(ctx, &Poly::from_coeffs(ctx, &[c as i64]));
        }
        acc
    }

    /// `self^e mod m` by square-and-multiply.
    pub fn powmod(&self, ctx: &PrimeFieldCtx, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(ctx, m);
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(ctx, &base).rem(ctx, m);
            }
            base = base.mul(ctx, &base).rem(ctx, m);
            e >>= 1;
        }
        acc
    }

    /// Resultant of two polynomials via the Euclidean algorithm.
    pub fn resultant(ctx: &PrimeFieldCtx, a: &Poly, b: &Poly) -> u64 {
        fn go(ctx: &PrimeFieldCtx, a: &Poly, b: &Poly) -> u64 {
            if b.is_zero() {
                return if a.degree() == Some(0) { 1 } else { 0 };
            }
            let db = b.degree().unwrap();
            if db == 0 {
                return ctx.powi(b.leading(), a.deg_or0() as i64);
            }
            let da = a.degree().unwrap_or(0);
            if a.is_zero() {
                return 0;
            }
            let r = a.rem(ctx, b);
            if r.is_zero() {
                // b divides a with deg b >= 1: common factor, resultant 0.
                return 0;
            }
            let dr = r.degree().unwrap() as i64;
            let sign = if (da * db) % 2 == 1 { ctx.neg(1) } else { 1 };
            let lc_pow = ctx.powi(b.leading(), da as i64 - dr);
            ctx.mul(sign, ctx.mul(lc_pow, go(ctx, b, &r)))
        }
        go(ctx, a, b)
    }

    /// Lagrange interpolation through distinct-abscissa points.
    pub fn interpolate(ctx: &PrimeFieldCtx, points: &[(u64, u64)]) -> Poly {
        let mut acc = Poly::zero();
        for (i, &(xi, yi)) in points.iter().enumerate() {
            let mut num = Poly::one();
            let mut den = 1u64;
            for (j, &(xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                num = num.mul(ctx, &Poly::from_coeffs(ctx, &[-(xj as i64), 1]));
                den = ctx.mul(den, ctx.sub(xi, xj));
            }
            acc = acc.add(ctx, &num.scale(ctx, ctx.mul(yi, ctx.inv(den))));
        }
        acc
    }

    /// Render as comma-separated coefficients, low degree first.
    pub fn spec_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Reduced fraction of polynomials over `F_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    /// Build and reduce; the denominator must be nonzero.
    pub fn new(ctx: &PrimeFieldCtx, num: Poly, den: Poly) -> Result<Self, super::FieldError> {
        if den.is_zero() {
            return Err(super::FieldError::ZeroDenominator);
        }
        Ok(Self::reduced(ctx, num, den))
    }

    /// A polynomial viewed as a rational function.
    pub fn from_poly(num: Poly) -> Self {
        RationalFn {
            num,
            den: Poly::one(),
        }
    }

    fn reduced(ctx: &PrimeFieldCtx, num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RationalFn {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        let g = num.gcd(ctx, &den);
        let num = num.divrem(ctx, &g).0;
        let den = den.divrem(ctx, &g).0;
        // Normalize the denominator monic so reduction is canonical.
        let s = ctx.inv(den.leading());
        RationalFn {
            num: num.scale(ctx, s),
            den: den.scale(ctx, s),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    /// Constant as a rational function (including zero)?
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// Evaluate; `None` marks a pole (denominator zero).
    pub fn eval(&self, ctx: &PrimeFieldCtx, x: u64) -> Option<u64> {
        self.eval_in(ctx, x)
    }

    /// Evaluate in an extension field.
    pub fn eval_in<F: Field>(&self, f: &F, x: u64) -> Option<u64> {
        let d = self.den.eval_in(f, x);
        if d == 0 {
            return None;
        }
        Some(f.mul(self.num.eval_in(f, x), f.inv(d)))
    }

    pub fn add(&self, ctx: &PrimeFieldCtx, other: &RationalFn) -> RationalFn {
        let num = self
            .num
            .mul(ctx, &other.den)
            .add(ctx, &other.num.mul(ctx, &self.den));
        let den = self.den.mul(ctx, &other.den);
        Self::reduced(ctx, num, den)
    }

    pub fn sub(&self, ctx: &PrimeFieldCtx, other: &RationalFn) -> RationalFn {
        self.add(ctx, &other.neg(ctx))
    }

    pub fn neg(&self, ctx: &PrimeFieldCtx) -> RationalFn {
        RationalFn {
            num: self.num.neg(ctx),
            den: self.den.clone(),
        }
    }

    /// Total degree proxy used for overflow caps.
    pub fn max_degree(&self) -> usize {
        self.num.deg_or0().max(self.den.deg_or0())
    }

    /// Substitute a rational function for `X`.
    pub fn compose(&self, ctx: &PrimeFieldCtx, inner: &RationalFn) -> RationalFn {
        // p(h)/q(h) with h = hn/hd: clear hd^max(deg p, deg q) from both.
        let dp = self.num.deg_or0();
        let dq = self.den.deg_or0();
        let d = dp.max(dq);
        let eval_cleared = |p: &Poly, dtot: usize| -> Poly {
            // hd^dtot * p(hn/hd) = Σ p_i hn^i hd^(dtot-i)
            let mut acc = Poly::zero();
            for (i, &c) in p.coeffs().iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let term = inner
                    .num
                    .pow(ctx, i as u64)
                    .mul(ctx, &inner.den.pow(ctx, (dtot - i) as u64))
                    .scale(ctx, c);
                acc = acc.add(ctx, &term);
            }
            acc
        };
        Self::reduced(ctx, eval_cleared(&self.num, d), eval_cleared(&self.den, d))
    }
}
