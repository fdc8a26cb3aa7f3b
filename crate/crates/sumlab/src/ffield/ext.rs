//! The extension field `F_{q^n}` with dense dlog tables.
//!
//! Elements are residues mod a fixed irreducible modulus, encoded as the
//! integer `Σ c_i q^i` of their coefficient vector; encodings below `q`
//! are exactly the prime subfield.  The modulus is the lexicographically
//! smallest monic irreducible (comparing coefficients from degree `n−1`
//! down), so contexts are deterministic.

use super::poly::Poly;
use super::{factorize, Field, FieldError, PrimeFieldCtx, MAX_FIELD};

const DLOG_SENTINEL: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct ExtFieldCtx {
    base: PrimeFieldCtx,
    n: u32,
    modulus: Poly,
    gen: u64,
    order: u64,
    dlog: Vec<u32>,
    expt: Vec<u32>,
    tr: Vec<u32>,
}

impl ExtFieldCtx {
    pub fn new(base: &PrimeFieldCtx, n: u32) -> Result<Self, FieldError> {
        if n == 0 {
            return Err(FieldError::BadDegree);
        }
        let q = base.q();
        let order = match q.checked_pow(n) {
            Some(o) if o <= MAX_FIELD => o,
            Some(o) => return Err(FieldError::TooLarge(o)),
            None => return Err(FieldError::TooLarge(u64::MAX)),
        };

        let modulus = find_modulus(base, n);
        let mut ctx = ExtFieldCtx {
            base: base.clone(),
            n,
            modulus,
            gen: 0,
            order,
            dlog: vec![DLOG_SENTINEL; order as usize],
            expt: vec![0; (order - 1) as usize],
            tr: vec![0; order as usize],
        };
        ctx.gen = ctx.find_generator();
        ctx.fill_log_tables();
        ctx.fill_trace_table();
        Ok(ctx)
    }

    pub fn q(&self) -> u64 {
        self.base.q()
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn generator(&self) -> u64 {
        self.gen
    }

    fn decode(&self, mut e: u64) -> Poly {
        let q = self.q();
        let mut coeffs = Vec::with_capacity(self.n as usize);
        while e > 0 {
            coeffs.push((e % q) as i64);
            e /= q;
        }
        Poly::from_coeffs(&self.base, &coeffs)
    }

    fn encode(&self, p: &Poly) -> u64 {
        let q = self.q();
        let mut acc = 0u64;
        for &c in p.coeffs().iter().rev() {
            acc = acc * q + c;
        }
        acc
    }

    /// Multiplication by polynomial arithmetic; used only while building
    /// the dlog tables (afterwards `mul` is a table composition).
    fn mul_raw(&self, a: u64, b: u64) -> u64 {
        let p = self
            .decode(a)
            .mul(&self.base, &self.decode(b))
            .rem(&self.base, &self.modulus);
        self.encode(&p)
    }

    fn pow_raw(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }

    fn find_generator(&self) -> u64 {
        let l = self.order - 1;
        let factors = factorize(l);
        (2..self.order)
            .find(|&e| factors.iter().all(|&(p, _)| self.pow_raw(e, l / p) != 1))
            .expect("extension field has a generator")
    }

    fn fill_log_tables(&mut self) {
        let mut x = 1u64;
        for k in 0..(self.order - 1) as usize {
            self.expt[k] = x as u32;
            debug_assert_eq!(self.dlog[x as usize], DLOG_SENTINEL, "generator order short");
            self.dlog[x as usize] = k as u32;
            x = self.mul_raw(x, self.gen);
        }
        assert_eq!(x, 1, "generator does not have order q^n - 1");
    }

    fn fill_trace_table(&mut self) {
        let q = self.q();
        // Tr is F_q-linear: tabulate it on the power basis X^j, then expand
        // each element digit-by-digit.
        let mut basis_tr = Vec::with_capacity(self.n as usize);
        for j in 0..self.n {
            let xj = Poly::x_pow(j as usize).rem(&self.base, &self.modulus);
            let mut acc = Poly::zero();
            let mut frob = xj;
            for _ in 0..self.n {
                acc = acc.add(&self.base, &frob);
                frob = frob.powmod(&self.base, q, &self.modulus);
            }
            let enc = self.encode(&acc);
            assert!(enc < q, "trace of basis element must lie in F_q");
            basis_tr.push(enc);
        }
        for e in 0..self.order {
            let mut rem = e;
            let mut acc = 0u64;
            for &t in &basis_tr {
                acc = (acc + (rem % q) * t) % q;
                rem /= q;
            }
            self.tr[e as usize] = acc as u32;
        }
    }
}

impl Field for ExtFieldCtx {
    fn order(&self) -> u64 {
        self.order
    }

    fn characteristic(&self) -> u64 {
        self.base.q()
    }

    fn base(&self) -> &PrimeFieldCtx {
        &self.base
    }

    fn add(&self, mut a: u64, mut b: u64) -> u64 {
        let q = self.q();
        let mut acc = 0u64;
        let mut place = 1u64;
        while a > 0 || b > 0 {
            acc += (a % q + b % q) % q * place;
            a /= q;
            b /= q;
            place *= q;
        }
        acc
    }

    fn neg(&self, mut a: u64) -> u64 {
        let q = self.q();
        let mut acc = 0u64;
        let mut place = 1u64;
        while a > 0 {
            let d = a % q;
            if d != 0 {
                acc += (q - d) * place;
            }
            a /= q;
            place *= q;
        }
        acc
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let l = self.order - 1;
        let k = self.dlog[a as usize] as u64 + self.dlog[b as usize] as u64;
        self.expt[(k % l) as usize] as u64
    }

    fn inv(&self, a: u64) -> u64 {
        if a == 0 {
            return 0;
        }
        let l = self.order - 1;
        let k = self.dlog[a as usize] as u64;
        self.expt[((l - k) % l) as usize] as u64
    }

    fn dlog(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        Some(self.dlog[a as usize] as u64)
    }

    fn gen_pow(&self, k: u64) -> u64 {
        self.expt[(k % (self.order - 1)) as usize] as u64
    }

    fn trace(&self, a: u64) -> u64 {
        self.tr[a as usize] as u64
    }

    fn norm(&self, a: u64) -> u64 {
        if a == 0 {
            return 0;
        }
        let v = self.powi(a, ((self.order - 1) / (self.q() - 1)) as i64);
        debug_assert!(v < self.q(), "norm lands in the prime subfield");
        v
    }
}

/// Lexicographically smallest monic irreducible of degree `n` over `F_q`,
/// comparing `(c_{n-1}, …, c_0)`.
fn find_modulus(base: &PrimeFieldCtx, n: u32) -> Poly {
    let q = base.q();
    let count = q.pow(n);
    for code in 0..count {
        // Decode with c_{n-1} most significant so the scan is lex order.
        let mut digits = vec![0i64; n as usize + 1];
        digits[n as usize] = 1;
        let mut rem = code;
        for j in 0..n as usize {
            digits[j] = (rem % q) as i64;
            rem /= q;
        }
        let f = Poly::from_coeffs(base, &digits);
        if is_irreducible(base, &f, n) {
            return f;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_q")
}

/// Irreducibility over `F_q` via the Frobenius criterion: `X^{q^n} ≡ X mod
/// f` and `gcd(X^{q^{n/p}} − X, f) = 1` for every prime `p | n`.
fn is_irreducible(base: &PrimeFieldCtx, f: &Poly, n: u32) -> bool {
    let q = base.q();
    let x = Poly::x();
    let frob_pow = |m: u32| -> Poly {
        // X^{q^m} mod f by iterating the q-power map.
        let mut acc = x.clone();
        for _ in 0..m {
            acc = acc.powmod(base, q, f);
        }
        acc
    };
    if frob_pow(n).sub(base, &x).rem(base, f) != Poly::zero() {
        return false;
    }
    for (p, _) in factorize(n as u64) {
        let g = frob_pow(n / p as u32).sub(base, &x).gcd(base, f);
        if g.degree() != Some(0) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ext(q: u64, n: u32) -> ExtFieldCtx {
        let base = PrimeFieldCtx::new(q).unwrap();
        ExtFieldCtx::new(&base, n).unwrap()
    }

    #[test]
    fn smallest_modulus_q3_n2() {
        // X^2 + 1 is irreducible mod 3 (−1 is a non-residue) and lex-first.
        let f = ext(3, 2);
        assert_eq!(f.modulus(), &Poly::from_coeffs(f.base(), &[1, 0, 1]));
        assert_eq!(f.order(), 9);
    }

    #[test]
    fn degenerate_degree_one_matches_base() {
        let f = ext(7, 1);
        assert_eq!(f.order(), 7);
        assert_eq!(f.generator(), f.base().generator());
        for a in 0..7u64 {
            assert_eq!(f.trace(a), a);
            assert_eq!(f.norm(a), a);
            for b in 0..7u64 {
                assert_eq!(f.add(a, b), (a + b) % 7);
                assert_eq!(f.mul(a, b), a * b % 7);
            }
        }
    }

    #[test]
    fn trace_matches_frobenius_formula_q5_n2() {
        // Tr(x) = x + x^5 on F_25, exhaustively.
        let f = ext(5, 2);
        for x in 0..25u64 {
            let expect = f.add(x, f.powi(x, 5));
            assert!(expect < 5, "x + x^5 lies in F_5");
            assert_eq!(f.trace(x), expect);
        }
    }

    #[test]
    fn trace_fibers_have_size_q() {
        for (q, n) in [(5u64, 2u32), (7, 2), (13, 2), (3, 3)] {
            let f = ext(q, n);
            let mut counts = vec![0u64; q as usize];
            for x in 0..f.order() {
                counts[f.trace(x) as usize] += 1;
            }
            let fiber = f.order() / q;
            assert!(counts.iter().all(|&c| c == fiber), "q={q} n={n}");
        }
    }

    #[test]
    fn trace_is_additive_and_norm_multiplicative() {
        let f = ext(3, 3);
        for a in 0..f.order() {
            for b in 0..f.order() {
                assert_eq!(
                    f.trace(f.add(a, b)),
                    (f.trace(a) + f.trace(b)) % 3,
                    "a={a} b={b}"
                );
                assert_eq!(f.norm(f.mul(a, b)), f.norm(a) * f.norm(b) % 3);
            }
        }
    }

    #[test]
    fn generator_has_full_order() {
        for (q, n) in [(3u64, 2u32), (5, 2), (3, 4)] {
            let f = ext(q, n);
            let l = f.order() - 1;
            for (p, _) in factorize(l) {
                assert_ne!(f.powi(f.generator(), (l / p) as i64), 1);
            }
            assert_eq!(f.powi(f.generator(), l as i64), 1);
        }
    }

    #[test]
    fn field_axioms_spot_checks() {
        let f = ext(3, 2);
        for a in 0..9u64 {
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
            for b in 0..9u64 {
                for c in 0..9u64 {
                    assert_eq!(
                        f.mul(a, f.add(b, c)),
                        f.add(f.mul(a, b), f.mul(a, c)),
                        "distributivity"
                    );
                }
            }
        }
    }

    #[test]
    fn caps_and_bad_degrees() {
        let base = PrimeFieldCtx::new(3).unwrap();
        assert_eq!(
            ExtFieldCtx::new(&base, 0).unwrap_err(),
            FieldError::BadDegree
        );
        assert!(matches!(
            ExtFieldCtx::new(&base, 20).unwrap_err(),
            FieldError::TooLarge(_)
        ));
    }
}
