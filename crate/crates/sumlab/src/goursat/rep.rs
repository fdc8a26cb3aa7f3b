//! Complex matrix representations of the enumerated groups, coinvariant
//! dimensions by character averaging, and the coinvariant dichotomy
//! check for subgroups of products.

use super::{closure, goursat_datum, Elem, FiniteGroup, GroupError};
use crate::C64;

/// Tolerance for multiplicativity of a representation.
const REP_TOL: f64 = 1e-8;
/// Tolerance for integrality of a character average.
const INT_TOL: f64 = 1e-6;
/// Cap on the product of tensor-factor dimensions.
const DIM_CAP: usize = 10_000;

/// A representation stored as one matrix per group element (row-major),
/// with character values cached.
#[derive(Debug, Clone)]
pub struct MatrixRep {
    pub dim: usize,
    mats: Vec<Vec<C64>>,
    pub chars: Vec<C64>,
}

fn mat_mul(a: &[C64], b: &[C64], d: usize) -> Vec<C64> {
    let mut c = vec![C64::new(0.0, 0.0); d * d];
    for i in 0..d {
        for k in 0..d {
            let aik = a[i * d + k];
            if aik == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..d {
                c[i * d + j] += aik * b[k * d + j];
            }
        }
    }
    c
}

fn mat_eye(d: usize) -> Vec<C64> {
    let mut m = vec![C64::new(0.0, 0.0); d * d];
    for i in 0..d {
        m[i * d + i] = C64::new(1.0, 0.0);
    }
    m
}

fn mat_close(a: &[C64], b: &[C64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).norm() < REP_TOL)
}

impl MatrixRep {
    /// Extend generator images along the group's BFS spanning tree, then
    /// verify multiplicativity on every pair of elements.
    pub fn from_generator_images(
        g: &FiniteGroup,
        images: &[Vec<C64>],
        dim: usize,
    ) -> Result<Self, GroupError> {
        assert_eq!(images.len(), g.generators().len());
        for img in images {
            assert_eq!(img.len(), dim * dim);
        }
        let mut mats: Vec<Vec<C64>> = Vec::with_capacity(g.order());
        mats.push(mat_eye(dim));
        for i in 1..g.order() {
            let (parent, gi) = g.word(i).expect("non-identity elements have words");
            mats.push(mat_mul(&mats[parent], &images[gi], dim));
        }
        let rep = MatrixRep {
            dim,
            chars: mats
                .iter()
                .map(|m| (0..dim).map(|i| m[i * dim + i]).sum())
                .collect(),
            mats,
        };
        // Exhaustive multiplicativity check (demo groups are small).
        for a in 0..g.order() {
            for b in 0..g.order() {
                let prod = mat_mul(&rep.mats[a], &rep.mats[b], dim);
                if !mat_close(&prod, &rep.mats[g.mul_idx(a, b)]) {
                    return Err(GroupError::NotMultiplicative);
                }
            }
        }
        Ok(rep)
    }

    pub fn trivial(g: &FiniteGroup) -> Self {
        MatrixRep {
            dim: 1,
            mats: vec![vec![C64::new(1.0, 0.0)]; g.order()],
            chars: vec![C64::new(1.0, 0.0); g.order()],
        }
    }

    pub fn matrix(&self, i: usize) -> &[C64] {
        &self.mats[i]
    }

    /// Dual representation: `g ↦ ρ(g⁻¹)ᵀ`, so `χ^∨ = χ∘inv`.
    pub fn dual(&self, g: &FiniteGroup) -> Self {
        let d = self.dim;
        let mats: Vec<Vec<C64>> = (0..g.order())
            .map(|i| {
                let src = &self.mats[g.inv_idx(i)];
                let mut m = vec![C64::new(0.0, 0.0); d * d];
                for r in 0..d {
                    for c in 0..d {
                        m[r * d + c] = src[c * d + r];
                    }
                }
                m
            })
            .collect();
        MatrixRep {
            dim: d,
            chars: (0..g.order()).map(|i| self.chars[g.inv_idx(i)]).collect(),
            mats,
        }
    }

    /// Pull a factor representation back through a component projection
    /// of a product group.
    pub fn pulled_back(
        &self,
        product: &FiniteGroup,
        component: usize,
        factor: &FiniteGroup,
    ) -> Self {
        let map: Vec<usize> = (0..product.order())
            .map(|i| {
                factor
                    .index_of(product.elem(i).component(component))
                    .expect("projection lands in the factor")
            })
            .collect();
        MatrixRep {
            dim: self.dim,
            mats: map.iter().map(|&j| self.mats[j].clone()).collect(),
            chars: map.iter().map(|&j| self.chars[j]).collect(),
        }
    }

    /// `Σ_g |χ(g)|²` (equals `|G|` for an irreducible character).
    pub fn char_norm_sq(&self) -> f64 {
        self.chars.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Dimension of the coinvariant space of `ρ₁⊗⋯⊗ρ_m` over `g`: the
/// character average `(1/|G|) Σ_g Π_i χ_i(g)`, which must land within
/// tolerance of a nonnegative integer.
pub fn coinvariant_dim(g: &FiniteGroup, reps: &[&MatrixRep]) -> Result<i64, GroupError> {
    let dims: usize = reps.iter().map(|r| r.dim).product();
    if dims > DIM_CAP {
        return Err(GroupError::PreconditionFailed(format!(
            "tensor dimension {dims} exceeds the cap {DIM_CAP}"
        )));
    }
    let mut sum = C64::new(0.0, 0.0);
    for i in 0..g.order() {
        let mut prod = C64::new(1.0, 0.0);
        for r in reps {
            prod *= r.chars[i];
        }
        sum += prod;
    }
    let avg = sum / g.order() as f64;
    let rounded = avg.re.round();
    if (avg.re - rounded).abs() > INT_TOL || avg.im.abs() > INT_TOL || rounded < 0.0 {
        return Err(GroupError::NotIntegral(avg.re));
    }
    Ok(rounded as i64)
}

/// Verdict of the coinvariant dichotomy check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GkrVerdict {
    /// Case (1): the tensor coinvariants vanish.
    ZeroCoinvariants,
    /// Case (2): nonzero coinvariants, with a factor pair `(i, j)` per
    /// index whose Goursat kernel fails to absorb the core.
    Witnesses { dim: i64, pairs: Vec<(usize, usize)> },
}

/// The dichotomy check for `G ⊆ Π G_i` with per-factor representations
/// and cores `N_i` (element indices into each factor).
///
/// Preconditions verified first: each core is perfect and has zero
/// coinvariants in its factor representation.  If the tensor
/// coinvariants are nonzero, a witnessing pair is exhibited for every
/// factor; failure to find one is an error (the dichotomy would be
/// falsified on the instance).
pub fn gkr_check(
    product: &FiniteGroup,
    factors: &[&FiniteGroup],
    reps: &[&MatrixRep],
    cores: &[Vec<usize>],
) -> Result<GkrVerdict, GroupError> {
    let m = factors.len();
    assert!(reps.len() == m && cores.len() == m);
    for i in 0..m {
        let table = factors[i].to_table()?;
        let sub = &cores[i];
        // Perfect core, checked inside the factor's table.
        let span = table.span(sub, false);
        let pos: std::collections::HashMap<usize, usize> =
            span.iter().enumerate().map(|(k, &x)| (x, k)).collect();
        let nn = span.len();
        let mut mul = vec![0usize; nn * nn];
        for (a, &x) in span.iter().enumerate() {
            for (b, &y) in span.iter().enumerate() {
                mul[a * nn + b] = pos[&table.mul(x, y)];
            }
        }
        let inv = span.iter().map(|&x| pos[&table.inv(x)]).collect();
        let core_group = super::SmallGroup { n: nn, mul, inv };
        if !core_group.is_perfect() {
            return Err(GroupError::PreconditionFailed(format!(
                "core {i} is not perfect"
            )));
        }
        // Zero core-coinvariants in V_i.
        let avg: C64 =
            span.iter().map(|&x| reps[i].chars[x]).sum::<C64>() / nn as f64;
        if avg.norm() > INT_TOL {
            return Err(GroupError::PreconditionFailed(format!(
                "core {i} has nonzero coinvariants in its factor representation"
            )));
        }
    }

    let pulled: Vec<MatrixRep> = (0..m)
        .map(|i| reps[i].pulled_back(product, i, factors[i]))
        .collect();
    let refs: Vec<&MatrixRep> = pulled.iter().collect();
    let dim = coinvariant_dim(product, &refs)?;
    if dim == 0 {
        return Ok(GkrVerdict::ZeroCoinvariants);
    }

    let mut pairs = Vec::with_capacity(m);
    for i in 0..m {
        let mut found = None;
        for j in 0..m {
            if j == i {
                continue;
            }
            // Projection of G onto the (i, j) pair of factors.
            let gens: Vec<Elem> = product
                .generators()
                .iter()
                .map(|g| {
                    Elem::Tuple(vec![g.component(i).clone(), g.component(j).clone()])
                })
                .collect();
            let proj = closure(&gens)?;
            let datum = goursat_datum(&proj, factors[i], factors[j])?;
            let h1: std::collections::HashSet<&Elem> = datum.h1.iter().collect();
            let escapes = cores[i]
                .iter()
                .any(|&n| !h1.contains(factors[i].elem(n)));
            if escapes {
                found = Some((i, j));
                break;
            }
        }
        match found {
            Some(p) => pairs.push(p),
            None => {
                return Err(GroupError::PreconditionFailed(format!(
                    "dichotomy violated: no witnessing pair for factor {i}"
                )))
            }
        }
    }
    Ok(GkrVerdict::Witnesses { dim, pairs })
}
