//! Complete sums over `F_q`: `Σ_I`, `Σ_II`, sums of products, box
//! averages, exchange-identity moments, graph counts, and the rank-one
//! constancy test.
//!
//! Everything here is an exact finite sum over immutable kernel tables;
//! the interesting structure is which pairs of evaluations are forced to
//! agree (the Σ_II decomposition and the moment exchange identity are
//! exact combinatorial identities and are verified as such).

pub mod survey;

pub use survey::{bucket_of, diagonal_survey, SurveyReport, SurveyRow};

use crate::ffield::{Field, PrimeFieldCtx, RationalFn};
use crate::tracefn::{KernelSpec, TraceTable};
use crate::{C64, TOL_IDENTITY};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Cap on enumerated tuples for moments and graph counts.
pub const TUPLE_CAP: f64 = 1e7;
/// Cap on exhaustive box enumeration.
pub const BOX_CAP: f64 = 1e6;
/// Cap on symbolic degrees in the constancy test.
pub const DEGREE_CAP: usize = 512;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CompleteError {
    #[error("enumeration of ~{0} tuples exceeds the cap")]
    TooLarge(u64),
    #[error("exhaustive box of {0} tuples exceeds the cap")]
    BoxTooLarge(u64),
    #[error("box [V,2V] must inject into F_q (need 4V < q)")]
    BoxOutOfRange,
    #[error("kernel has no extension-field tabulation")]
    UnsupportedExtension,
    #[error("symbolic degree exceeds the cap")]
    DegreeOverflow,
    #[error("bad parameters: {0}")]
    BadParams(String),
}

/// Parameters of one complete-sum evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleParams {
    pub l: usize,
    /// Argument exponent in `K(s(r+v)^c)`.
    pub c: i64,
    /// Σ_II exclusion order (`s₁^d ≠ s₂^d`).
    pub d: u64,
    /// Shift tuple of length `2l`.
    pub v: Vec<u64>,
}

impl TupleParams {
    pub fn new(l: usize, c: i64, d: u64, v: Vec<u64>) -> Result<Self, CompleteError> {
        if l == 0 || v.len() != 2 * l {
            return Err(CompleteError::BadParams(format!(
                "v must have length 2l = {}, got {}",
                2 * l,
                v.len()
            )));
        }
        if c == 0 || d == 0 {
            return Err(CompleteError::BadParams("c and d must be nonzero".into()));
        }
        Ok(TupleParams { l, c, d, v })
    }

    /// Is the tuple permutation-diagonal (second half a permutation of the
    /// first)?
    pub fn is_diagonal(&self) -> bool {
        let mut a = self.v[..self.l].to_vec();
        let mut b = self.v[self.l..].to_vec();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }
}

/// `(x)^c` as an argument component; `None` encodes the point at infinity
/// (zero base with negative exponent).
fn arg_pow<F: Field>(f: &F, x: u64, c: i64) -> Option<u64> {
    if x == 0 && c < 0 {
        return None;
    }
    Some(f.powi(x, c))
}

/// Kernel lookup at `s·w` where `w` may be ∞.
#[inline]
fn lookup<F: Field>(f: &F, k: &TraceTable, s: u64, w: Option<u64>) -> C64 {
    match w {
        Some(w) => k.value(f.mul(s, w)),
        None => k.inf_value,
    }
}

/// Product `K_c(r, s, v⃗) = Π_i K(s(r+v_i)^c) · conj(K(s(r+v_{i+l})^c))`
/// given the precomputed powers `w_i = (r+v_i)^c`.
fn kc_product<F: Field>(f: &F, k: &TraceTable, s: u64, ws: &[Option<u64>], l: usize) -> C64 {
    let mut acc = C64::new(1.0, 0.0);
    for (i, &w) in ws.iter().enumerate() {
        let factor = lookup(f, k, s, w);
        acc *= if i < l { factor } else { factor.conj() };
    }
    acc
}

fn powers_at<F: Field>(f: &F, p: &TupleParams, r: u64) -> Vec<Option<u64>> {
    p.v.iter()
        .map(|&vi| arg_pow(f, f.add(r, vi), p.c))
        .collect()
}

/// `Σ_I(v⃗) = Σ_{r∈F} Σ_{s∈F^×} K_c(r, s, v⃗)`, exact `q(q−1)`-term sum.
pub fn sigma_i<F: Field>(f: &F, k: &TraceTable, p: &TupleParams) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for r in 0..f.order() {
        let ws = powers_at(f, p, r);
        for s in 1..f.order() {
            acc += kc_product(f, k, s, &ws, p.l);
        }
    }
    acc
}

/// `Σ_II^{(d)}(v⃗)`: triple sum over `r` and `s₁, s₂` with `s₁^d ≠ s₂^d`,
/// computed by the direct triple loop.
pub fn sigma_ii_direct<F: Field>(f: &F, k: &TraceTable, p: &TupleParams) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for r in 0..f.order() {
        let ws = powers_at(f, p, r);
        let row: Vec<C64> = (1..f.order())
            .map(|s| kc_product(f, k, s, &ws, p.l))
            .collect();
        for s1 in 1..f.order() {
            let p1 = f.powi(s1, p.d as i64);
            for s2 in 1..f.order() {
                if f.powi(s2, p.d as i64) == p1 {
                    continue;
                }
                acc += row[(s1 - 1) as usize] * row[(s2 - 1) as usize].conj();
            }
        }
    }
    acc
}

/// `Σ_II^{(d)}(v⃗)` by the exact decomposition
/// `Σ_r |Σ_s K_c|² − Σ_{ξ^d=1} Σ_{r,s} K_c(r,s) conj(K_c(r,ξs))`.
pub fn sigma_ii<F: Field>(f: &F, k: &TraceTable, p: &TupleParams) -> C64 {
    let l_ord = f.order() - 1;
    let g = crate::ffield::gcd(p.d % l_ord, l_ord).max(1);
    let roots: Vec<u64> = (0..g).map(|j| f.gen_pow(j * (l_ord / g))).collect();
    let mut acc = C64::new(0.0, 0.0);
    for r in 0..f.order() {
        let ws = powers_at(f, p, r);
        let row: Vec<C64> = (1..f.order())
            .map(|s| kc_product(f, k, s, &ws, p.l))
            .collect();
        let total: C64 = row.iter().sum();
        acc += total * total.conj();
        for &xi in &roots {
            for s in 1..f.order() {
                let xs = f.mul(xi, s);
                acc -= row[(s - 1) as usize] * row[(xs - 1) as usize].conj();
            }
        }
    }
    acc
}

/// Sum of products `Σ_{v∈F^×} Π_i K(u_i v) · conj(K(u_{i+l} v))`.
pub fn sum_of_products<F: Field>(f: &F, k: &TraceTable, l: usize, u: &[u64]) -> C64 {
    assert_eq!(u.len(), 2 * l, "u must have length 2l");
    let mut acc = C64::new(0.0, 0.0);
    for v in 1..f.order() {
        let mut term = C64::new(1.0, 0.0);
        for (i, &ui) in u.iter().enumerate() {
            let factor = k.value(f.mul(ui, v));
            term *= if i < l { factor } else { factor.conj() };
        }
        acc += term;
    }
    acc
}

/// Sampling strategy for box averages and surveys.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    Exhaustive,
    Sample { n: usize, seed: u64 },
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct BoxAverageReport {
    pub mean: f64,
    /// Standard error of the mean (sampled mode only).
    pub std_err: Option<f64>,
    pub count: u64,
    pub v_max: u64,
    pub seed: Option<u64>,
}

/// Average of `|Σ_I(v⃗)|` over the integer box `[V, 2V]^{2l}` embedded in
/// `F_q` (requires `4V < q` so the box injects).
pub fn box_average<F: Field>(
    f: &F,
    k: &TraceTable,
    l: usize,
    v_max: u64,
    c: i64,
    mode: SampleMode,
) -> Result<BoxAverageReport, CompleteError> {
    let q = f.order();
    if 4 * v_max >= q {
        return Err(CompleteError::BoxOutOfRange);
    }
    let side = v_max + 1; // integers in [V, 2V]
    let abs_at = |v: &[u64]| -> f64 {
        let p = TupleParams::new(l, c, 1, v.to_vec()).expect("valid tuple");
        sigma_i(f, k, &p).norm()
    };
    match mode {
        SampleMode::Exhaustive => {
            let count = (side as f64).powi(2 * l as i32);
            if count > BOX_CAP {
                return Err(CompleteError::BoxTooLarge(count as u64));
            }
            let mut sum = 0.0;
            let mut v = vec![v_max; 2 * l];
            let count = count as u64;
            for idx in 0..count {
                let mut rem = idx;
                for slot in v.iter_mut() {
                    *slot = v_max + rem % side;
                    rem /= side;
                }
                sum += abs_at(&v);
            }
            Ok(BoxAverageReport {
                mean: sum / count as f64,
                std_err: None,
                count,
                v_max,
                seed: None,
            })
        }
        SampleMode::Sample { n, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            for _ in 0..n {
                let v: Vec<u64> = (0..2 * l)
                    .map(|_| v_max + rng.gen_range(0..side))
                    .collect();
                let a = abs_at(&v);
                sum += a;
                sumsq += a * a;
            }
            let mean = sum / n as f64;
            let var = (sumsq / n as f64 - mean * mean).max(0.0);
            Ok(BoxAverageReport {
                mean,
                std_err: Some((var / n as f64).sqrt()),
                count: n as u64,
                v_max,
                seed: Some(seed),
            })
        }
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct MomentReport {
    /// `Σ_{v⃗∈F^{2l}} |Σ_I(v⃗)|^{2m}`, summed tuple by tuple.
    pub direct: f64,
    /// The same moment through the exchange identity
    /// `Σ_{(r⃗,s⃗)} |Σ_v K′_c|^{2l}`.
    pub exchanged: f64,
    pub rel_err: f64,
    /// `q^{2m+2l} + q^{4m+l}` (the shape of the proven bound).
    pub bound_shape: f64,
    /// `direct / bound_shape`: the measured implied constant.
    pub constant: f64,
    pub field_order: u64,
    pub l: usize,
    pub m: usize,
}

/// Both sides of the moment exchange identity for a tabulated kernel.
///
/// With `a(v, (r,s)) = K(s(v+r)^c)` the direct side opens out
/// `Σ_I(v⃗) = Σ_{(r,s)} Π_i a(v_i)·conj(a(v_{i+l}))` and the exchanged
/// side sums `|Σ_v Π_j a(v,(r_j,s_j))·conj(a(v,(r_{j+m},s_{j+m})))|^{2l}`
/// over `(r⃗, s⃗)`; the two are equal by rearrangement, which this
/// function verifies numerically.
pub fn moment_sigma_i_table<F: Field>(
    f: &F,
    k: &TraceTable,
    l: usize,
    m: usize,
    c: i64,
) -> Result<MomentReport, CompleteError> {
    let q = f.order();
    let qf = q as f64;
    if qf.powi(2 * l as i32) > TUPLE_CAP || qf.powi(4 * m as i32) > TUPLE_CAP {
        return Err(CompleteError::TooLarge(
            qf.powi((4 * m).max(2 * l) as i32) as u64
        ));
    }
    let pairs: Vec<(u64, u64)> = (0..q)
        .flat_map(|r| (1..q).map(move |s| (r, s)))
        .collect();
    let np = pairs.len();
    // a[v][p] = K(s_p (v + r_p)^c)
    let a: Vec<Vec<C64>> = (0..q)
        .map(|v| {
            pairs
                .iter()
                .map(|&(r, s)| lookup(f, k, s, arg_pow(f, f.add(v, r), c)))
                .collect()
        })
        .collect();

    // Direct side: Σ over v⃗ of |Σ_p Π_i a[v_i][p] conj(a[v_{i+l}][p])|^{2m}.
    let mut direct = 0.0;
    let mut v = vec![0u64; 2 * l];
    let v_tuples = qf.powi(2 * l as i32) as u64;
    for idx in 0..v_tuples {
        let mut rem = idx;
        for slot in v.iter_mut() {
            *slot = rem % q;
            rem /= q;
        }
        let mut inner = C64::new(0.0, 0.0);
        for p in 0..np {
            let mut prod = C64::new(1.0, 0.0);
            for (i, &vi) in v.iter().enumerate() {
                let factor = a[vi as usize][p];
                prod *= if i < l { factor } else { factor.conj() };
            }
            inner += prod;
        }
        direct += inner.norm_sqr().powi(m as i32);
    }

    // Exchanged side: Σ over p⃗ of |Σ_v Π_j a[v][p_j] conj(a[v][p_{j+m}])|^{2l}.
    let mut exchanged = 0.0;
    let mut pidx = vec![0usize; 2 * m];
    let p_tuples = (np as f64).powi(2 * m as i32) as u64;
    for idx in 0..p_tuples {
        let mut rem = idx;
        for slot in pidx.iter_mut() {
            *slot = (rem % np as u64) as usize;
            rem /= np as u64;
        }
        let mut inner = C64::new(0.0, 0.0);
        for vv in 0..q as usize {
            let row = &a[vv];
            let mut prod = C64::new(1.0, 0.0);
            for (j, &pj) in pidx.iter().enumerate() {
                let factor = row[pj];
                prod *= if j < m { factor } else { factor.conj() };
            }
            inner += prod;
        }
        exchanged += inner.norm_sqr().powi(l as i32);
    }

    let bound_shape = qf.powi((2 * m + 2 * l) as i32) + qf.powi((4 * m + l) as i32);
    Ok(MomentReport {
        direct,
        exchanged,
        rel_err: crate::rel_err_f64(direct, exchanged),
        bound_shape,
        constant: direct / bound_shape,
        field_order: q,
        l,
        m,
    })
}

/// Moment with optional base change to `F_{q^n}`: re-tabulates the kernel
/// over the extension (only formula-defined kernels support this).
pub fn moment_sigma_i(
    ctx: &PrimeFieldCtx,
    spec: &KernelSpec,
    l: usize,
    m: usize,
    n_ext: u32,
    c: i64,
) -> Result<MomentReport, CompleteError> {
    if n_ext <= 1 {
        let k = spec
            .tabulate(ctx)
            .map_err(|e| CompleteError::BadParams(e.to_string()))?;
        return moment_sigma_i_table(ctx, &k, l, m, c);
    }
    if !spec.supports_extension() {
        return Err(CompleteError::UnsupportedExtension);
    }
    let ext = crate::ffield::ExtFieldCtx::new(ctx, n_ext)
        .map_err(|e| CompleteError::BadParams(e.to_string()))?;
    let k = spec
        .tabulate_in(&ext)
        .map_err(|e| CompleteError::BadParams(e.to_string()))?;
    moment_sigma_i_table(&ext, &k, l, m, c)
}

/// Assert helper used by self-tests: the two moment evaluations agree.
pub fn moment_identity_holds(report: &MomentReport) -> bool {
    report.rel_err < TOL_IDENTITY
}

/// Undirected graph on `{0..n}` with optional loops.
#[derive(Debug, Clone)]
pub struct Graph {
    pub n: usize,
    adj: Vec<Vec<bool>>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![vec![false; n]; n];
        for &(a, b) in edges {
            adj[a][b] = true;
            adj[b][a] = true;
        }
        Graph { n, adj }
    }

    /// Add a loop at every vertex.
    pub fn with_loops(mut self) -> Self {
        for i in 0..self.n {
            self.adj[i][i] = true;
        }
        self
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a][b]
    }

    /// Max degree, counting a loop once.
    pub fn max_degree(&self) -> usize {
        (0..self.n)
            .map(|i| (0..self.n).filter(|&j| self.adj[i][j]).count())
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct DeltaReport {
    pub count: u64,
    /// `(#graphs on 2m vertices) · C^{2m} · |V|^m` with `C = max degree`.
    pub bound: f64,
    pub ratio: f64,
}

/// Exact `|Δ_m(V,E)|`: tuples `(v_1..v_{2m})` where every `v_i` is
/// adjacent to some `v_j`, `j ≠ i`.
pub fn delta_graph_count(g: &Graph, m: usize) -> Result<DeltaReport, CompleteError> {
    let n = g.n as u64;
    let tuples = (n as f64).powi(2 * m as i32);
    if tuples > TUPLE_CAP {
        return Err(CompleteError::TooLarge(tuples as u64));
    }
    let mut count = 0u64;
    let mut v = vec![0usize; 2 * m];
    for idx in 0..tuples as u64 {
        let mut rem = idx;
        for slot in v.iter_mut() {
            *slot = (rem % n) as usize;
            rem /= n;
        }
        let ok = (0..2 * m).all(|i| {
            (0..2 * m).any(|j| j != i && g.adjacent(v[i], v[j]))
        });
        if ok {
            count += 1;
        }
    }
    let c = g.max_degree().max(1) as f64;
    let graphs = 2f64.powi(((2 * m) * (2 * m - 1) / 2 + 2 * m) as i32);
    let bound = graphs * c.powi(2 * m as i32) * (n as f64).powi(m as i32);
    Ok(DeltaReport {
        count,
        bound,
        ratio: count as f64 / bound,
    })
}

/// Symbolic constancy test for the rank-one obstruction: forms
/// `Σ_{j<m} g(s_j(X+r_j)^c) − Σ_{j≥m} g(s_{j+m}(X+r_{j+m})^c)` as a
/// rational function over `F_q` and tests whether it is constant.
pub fn rank1_constancy_test(
    ctx: &PrimeFieldCtx,
    g: &RationalFn,
    c: i64,
    r: &[u64],
    s: &[u64],
) -> Result<bool, CompleteError> {
    if r.len() != s.len() || r.len() % 2 != 0 || r.is_empty() {
        return Err(CompleteError::BadParams(
            "r and s must have equal even length".into(),
        ));
    }
    let m = r.len() / 2;
    let est = g.max_degree() * c.unsigned_abs() as usize * r.len();
    if est > DEGREE_CAP {
        return Err(CompleteError::DegreeOverflow);
    }
    let mut acc = RationalFn::from_poly(crate::ffield::Poly::zero());
    for j in 0..2 * m {
        // h(X) = s_j (X + r_j)^c as a rational function.
        let base = crate::ffield::Poly::from_coeffs(ctx, &[r[j] as i64, 1]);
        let h = if c >= 0 {
            RationalFn::from_poly(base.pow(ctx, c as u64).scale(ctx, s[j] % ctx.q()))
        } else {
            RationalFn::new(
                ctx,
                crate::ffield::Poly::constant(ctx, s[j] % ctx.q()),
                base.pow(ctx, (-c) as u64),
            )
            .map_err(|e| CompleteError::BadParams(e.to_string()))?
        };
        let term = g.compose(ctx, &h);
        if term.max_degree() > DEGREE_CAP {
            return Err(CompleteError::DegreeOverflow);
        }
        acc = if j < m {
            acc.add(ctx, &term)
        } else {
            acc.sub(ctx, &term)
        };
    }
    Ok(acc.is_constant())
}

/// Seeded random tuple in `F_q^{2l}` (used by surveys and acceptance).
pub fn random_tuple(rng: &mut ChaCha8Rng, q: u64, len: usize) -> Vec<u64> {
    (0..len).map(|_| rng.gen_range(0..q)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::{Poly, PrimeFieldCtx};
    use crate::tracefn::builders::{fiber_count, kloosterman};
    use crate::{TOL_IDENTITY, TOL_TABLE};

    fn prime(q: u64) -> PrimeFieldCtx {
        PrimeFieldCtx::new(q).unwrap()
    }

    /// Fully independent Σ_I oracle: raw nested loops, no shared helpers.
    fn sigma_i_oracle(ctx: &PrimeFieldCtx, k: &TraceTable, l: usize, c: i64, v: &[u64]) -> C64 {
        let q = ctx.q();
        let mut acc = C64::new(0.0, 0.0);
        for r in 0..q {
            's: for s in 1..q {
                let mut prod = C64::new(1.0, 0.0);
                for (i, &vi) in v.iter().enumerate() {
                    let base = (r + vi) % q;
                    if base == 0 && c < 0 {
                        continue 's; // K(∞) = 0 for catalog kernels
                    }
                    let arg = s * ctx.powi(base, c) % q;
                    let f = k.value(arg);
                    prod *= if i < l { f } else { f.conj() };
                }
                acc += prod;
            }
        }
        acc
    }

    #[test]
    fn sigma_i_matches_oracle_and_diagonal_positivity() {
        let ctx = prime(7);
        let k = kloosterman(&ctx, 2);
        for c in [1i64, 2, -1] {
            for v in [[0u64, 1], [3, 5], [2, 2]] {
                let p = TupleParams::new(1, c, 1, v.to_vec()).unwrap();
                let got = sigma_i(&ctx, &k, &p);
                let want = sigma_i_oracle(&ctx, &k, 1, c, &v);
                assert!((got - want).norm() < TOL_TABLE, "c={c} v={v:?}");
            }
        }
        // Diagonal (v, v): real and nonnegative.
        let p = TupleParams::new(1, 1, 1, vec![4, 4]).unwrap();
        let val = sigma_i(&ctx, &k, &p);
        assert!(val.im.abs() < TOL_TABLE);
        assert!(val.re >= -TOL_TABLE);
    }

    #[test]
    fn sigma_i_counting_oracle_for_indicator() {
        // K = 1 on units: Σ_I counts pairs (r, s) with every r + v_i ≠ 0,
        // i.e. (q − #distinct(−v_i)) · (q − 1).
        let ctx = prime(11);
        let k = TraceTable::indicator_units(11);
        let v = vec![0u64, 3, 5, 3];
        let p = TupleParams::new(2, 1, 1, v.clone()).unwrap();
        let val = sigma_i(&ctx, &k, &p);
        let mut distinct = v.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let expect = (11 - distinct.len() as u64) * 10;
        assert!((val - C64::new(expect as f64, 0.0)).norm() < TOL_TABLE);
    }

    #[test]
    fn sigma_i_symmetries() {
        let ctx = prime(7);
        let k = kloosterman(&ctx, 2);
        let v = vec![1u64, 4, 2, 6];
        let p = TupleParams::new(2, 1, 1, v.clone()).unwrap();
        let base = sigma_i(&ctx, &k, &p);

        // Permuting within each half leaves the value unchanged.
        let p2 = TupleParams::new(2, 1, 1, vec![4, 1, 6, 2]).unwrap();
        assert!((sigma_i(&ctx, &k, &p2) - base).norm() < TOL_TABLE);

        // Swapping halves conjugates.
        let p3 = TupleParams::new(2, 1, 1, vec![2, 6, 1, 4]).unwrap();
        assert!((sigma_i(&ctx, &k, &p3) - base.conj()).norm() < TOL_TABLE);
    }

    /// Independent Σ_II oracle with the exclusion in the inner loop.
    fn sigma_ii_oracle(ctx: &PrimeFieldCtx, k: &TraceTable, p: &TupleParams) -> C64 {
        let q = ctx.q();
        let kc = |r: u64, s: u64| -> C64 {
            let mut prod = C64::new(1.0, 0.0);
            for (i, &vi) in p.v.iter().enumerate() {
                let base = (r + vi) % q;
                let f = if base == 0 && p.c < 0 {
                    C64::new(0.0, 0.0)
                } else {
                    k.value(s * ctx.powi(base, p.c) % q)
                };
                prod *= if i < p.l { f } else { f.conj() };
            }
            prod
        };
        let mut acc = C64::new(0.0, 0.0);
        for r in 0..q {
            for s1 in 1..q {
                for s2 in 1..q {
                    if ctx.powi(s1, p.d as i64) == ctx.powi(s2, p.d as i64) {
                        continue;
                    }
                    acc += kc(r, s1) * kc(r, s2).conj();
                }
            }
        }
        acc
    }

    #[test]
    fn sigma_ii_oracle_and_decomposition() {
        let ctx = prime(5);
        let k = kloosterman(&ctx, 2);
        let p = TupleParams::new(1, 1, 1, vec![0, 0]).unwrap();
        let want = sigma_ii_oracle(&ctx, &k, &p);
        let direct = sigma_ii_direct(&ctx, &k, &p);
        let fast = sigma_ii(&ctx, &k, &p);
        assert!((direct - want).norm() < TOL_TABLE);
        assert!(crate::rel_err(fast, direct) < TOL_IDENTITY);
    }

    #[test]
    fn sigma_ii_decomposition_spot_checks() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in [5u64, 7, 11] {
            let ctx = prime(q);
            let k = kloosterman(&ctx, 2);
            for d in [1u64, 2, 3] {
                let v: Vec<u64> = (0..4).map(|_| rng.gen_range(0..q)).collect();
                let p = TupleParams::new(2, 1, d, v).unwrap();
                let a = sigma_ii_direct(&ctx, &k, &p);
                let b = sigma_ii(&ctx, &k, &p);
                assert!(
                    crate::rel_err(a, b) < TOL_IDENTITY,
                    "q={q} d={d}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn sigma_ii_full_exclusion_vanishes() {
        // d = q−1 makes s^d ≡ 1 for every s: all pairs excluded.
        let ctx = prime(7);
        let k = kloosterman(&ctx, 2);
        let p = TupleParams::new(1, 1, 6, vec![1, 2]).unwrap();
        assert!(sigma_ii_direct(&ctx, &k, &p).norm() < TOL_TABLE);
        assert!(sigma_ii(&ctx, &k, &p).norm() < TOL_TABLE);
    }

    #[test]
    fn sigma_ii_zero_kernel() {
        let ctx = prime(5);
        let zero = TraceTable::new(5, vec![C64::new(0.0, 0.0); 5], "zero", 1);
        let p = TupleParams::new(1, 1, 1, vec![1, 2]).unwrap();
        assert_eq!(sigma_ii_direct(&ctx, &zero, &p), C64::new(0.0, 0.0));
    }

    #[test]
    fn sop_diagonal_nonnegative_and_sizable() {
        let ctx = prime(101);
        let k = kloosterman(&ctx, 2);
        // l=1, u=(u,u): Σ_v |K(uv)|² ≥ 0.
        let val = sum_of_products(&ctx, &k, 1, &[3, 3]);
        assert!(val.im.abs() < TOL_TABLE);
        assert!(val.re >= 0.0);
        // Fully-paired diagonal at l=2 is real and of order q.
        let val = sum_of_products(&ctx, &k, 2, &[1, 2, 1, 2]);
        assert!(val.im.abs() < TOL_TABLE);
        assert!(val.re >= 101.0 / 4.0, "diagonal too small: {}", val.re);
    }

    #[test]
    fn box_average_small_cases() {
        let ctx = prime(11);
        let k = kloosterman(&ctx, 2);
        // V = 0: single tuple, mean = |Σ_I(0⃗)|.
        let r = box_average(&ctx, &k, 1, 0, 1, SampleMode::Exhaustive).unwrap();
        let p = TupleParams::new(1, 1, 1, vec![0, 0]).unwrap();
        assert!((r.mean - sigma_i(&ctx, &k, &p).norm()).abs() < TOL_TABLE);
        assert_eq!(r.count, 1);

        // V = 1, l = 1: tuples of length 2 over {1, 2}, so 4 of them.
        let r = box_average(&ctx, &k, 1, 1, 1, SampleMode::Exhaustive).unwrap();
        assert_eq!(r.count, 4);
        let mut hand = 0.0;
        for v1 in 1..=2u64 {
            for v2 in 1..=2u64 {
                let p = TupleParams::new(1, 1, 1, vec![v1, v2]).unwrap();
                hand += sigma_i(&ctx, &k, &p).norm();
            }
        }
        assert!((r.mean - hand / 4.0).abs() < TOL_TABLE);

        // Box must inject.
        assert_eq!(
            box_average(&ctx, &k, 1, 3, 1, SampleMode::Exhaustive).unwrap_err(),
            CompleteError::BoxOutOfRange
        );
    }

    #[test]
    fn moment_exchange_identity_counting_case() {
        // K = 1 on units: both sides are pure counts and must agree.
        let ctx = prime(5);
        let k = TraceTable::indicator_units(5);
        let rep = moment_sigma_i_table(&ctx, &k, 1, 1, 1).unwrap();
        assert!(rep.rel_err < TOL_IDENTITY, "{rep:?}");
    }

    #[test]
    fn moment_exchange_identity_kernels() {
        for q in [5u64, 7] {
            let ctx = prime(q);
            let kl = kloosterman(&ctx, 2);
            let fib = fiber_count(&ctx, &Poly::from_coeffs(&ctx, &[0, 0, 1])).unwrap();
            for k in [&kl, &fib] {
                let rep = moment_sigma_i_table(&ctx, k, 1, 1, 1).unwrap();
                assert!(
                    rep.rel_err < TOL_IDENTITY,
                    "q={q} {}: {rep:?}",
                    k.label
                );
            }
        }
        // One mixed case (l=2, m=1) to exercise asymmetric exponents here;
        // the acceptance suite runs the full (l, m) grid.
        let ctx = prime(5);
        let k = kloosterman(&ctx, 2);
        let rep = moment_sigma_i_table(&ctx, &k, 2, 1, 1).unwrap();
        assert!(rep.rel_err < TOL_IDENTITY);
    }

    #[test]
    fn moment_bound_constant() {
        for q in [5u64, 7, 11] {
            let ctx = prime(q);
            let k = kloosterman(&ctx, 2);
            let rep = moment_sigma_i_table(&ctx, &k, 1, 1, 1).unwrap();
            assert!(
                rep.direct <= 50.0 * rep.bound_shape,
                "q={q}: {} > 50·{}",
                rep.direct,
                rep.bound_shape
            );
        }
    }

    #[test]
    fn moment_over_extension() {
        let ctx = prime(3);
        let spec = KernelSpec::Kloosterman { r: 2 };
        let rep = moment_sigma_i(&ctx, &spec, 1, 1, 2, 1).unwrap();
        assert_eq!(rep.field_order, 9);
        assert!(rep.rel_err < TOL_IDENTITY, "{rep:?}");

        let toric = KernelSpec::Toric { a: 1, b: 1, c: 1 };
        assert_eq!(
            moment_sigma_i(&ctx, &toric, 1, 1, 2, 1).unwrap_err(),
            CompleteError::UnsupportedExtension
        );
    }

    #[test]
    fn delta_counts() {
        // Edgeless + loops, m=1: only constant pairs (v, v).
        let g = Graph::new(4, &[]).with_loops();
        let rep = delta_graph_count(&g, 1).unwrap();
        assert_eq!(rep.count, 4);
        assert!(rep.count as f64 <= rep.bound);

        // Path graph on 3 vertices + loops, m=1: independent hand oracle.
        let g = Graph::new(3, &[(0, 1), (1, 2)]).with_loops();
        let rep = delta_graph_count(&g, 1).unwrap();
        let mut hand = 0;
        for a in 0..3usize {
            for b in 0..3usize {
                if g.adjacent(a, b) {
                    hand += 1;
                }
            }
        }
        assert_eq!(rep.count, hand);

        // K4 + loops, m=2: every tuple qualifies (graph is complete).
        let g = Graph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).with_loops();
        let rep = delta_graph_count(&g, 2).unwrap();
        assert_eq!(rep.count, 256);
        assert!(rep.count as f64 <= rep.bound);
    }

    #[test]
    fn rank1_constancy_cases() {
        let ctx = prime(7);
        // Paired equality: identically zero, hence constant.
        let g = RationalFn::new(&ctx, Poly::one(), Poly::x()).unwrap();
        assert!(rank1_constancy_test(&ctx, &g, 1, &[2, 2], &[3, 3]).unwrap());

        // g = X², c = 1 with s₁² = s₂² and r₁s₁² = r₂s₂²: constant.
        let gsq = RationalFn::from_poly(Poly::from_coeffs(&ctx, &[0, 0, 1]));
        assert!(rank1_constancy_test(&ctx, &gsq, 1, &[3, 3], &[1, 6]).unwrap());
        // Perturbing r breaks it.
        assert!(!rank1_constancy_test(&ctx, &gsq, 1, &[3, 4], &[1, 6]).unwrap());

        // g = 1/X with generic distinct parameters: nonconstant.
        assert!(!rank1_constancy_test(&ctx, &g, 1, &[1, 2], &[1, 1]).unwrap());
    }
}
