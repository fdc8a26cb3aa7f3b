//! Finite-group machinery: closure from generators, Goursat data for
//! subgroups of products, perfect/center/simple/quasisimple tests, and
//! the commuting-subgroups witness.
//!
//! Elements are permutations, matrices over a prime field, or tuples of
//! those; structural tests run on an explicit multiplication table, so
//! they are exhaustive rather than probabilistic.

pub mod demos;
pub mod rep;

pub use demos::{certificate, Certificate};
pub use rep::{coinvariant_dim, gkr_check, GkrVerdict, MatrixRep};

use std::collections::HashMap;
use thiserror::Error;

/// Cap on group order during closure.
pub const ORDER_CAP: usize = 100_000;
/// Cap on group order for table-based structural tests.
pub const TABLE_CAP: usize = 2_000;
/// Cap on generator count.
pub const GENERATOR_CAP: usize = 8;

#[derive(Debug, Error, PartialEq)]
pub enum GroupError {
    #[error("closure exceeded the order cap {ORDER_CAP}")]
    OrderCapExceeded,
    #[error("at most {GENERATOR_CAP} generators supported")]
    TooManyGenerators,
    #[error("projection is not surjective onto the stated factor")]
    NotSurjective,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("subgroup is not quasisimple")]
    NotQuasisimple,
    #[error("character average {0} is not within tolerance of an integer")]
    NotIntegral(f64),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("group of order {0} exceeds the structural-test cap {TABLE_CAP}")]
    TableTooLarge(usize),
    #[error("representation is not multiplicative on the group")]
    NotMultiplicative,
}

/// A group element: permutation (images of `0..n`), matrix over `F_p`
/// (row-major), or a tuple of elements of a product group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Elem {
    Perm(Vec<u8>),
    Mat { p: u64, n: usize, a: Vec<u64> },
    Tuple(Vec<Elem>),
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

impl Elem {
    /// The identity of the same kind and size as `self`.
    pub fn identity_like(&self) -> Elem {
        match self {
            Elem::Perm(v) => Elem::Perm((0..v.len() as u8).collect()),
            Elem::Mat { p, n, .. } => {
                let mut a = vec![0u64; n * n];
                for i in 0..*n {
                    a[i * n + i] = 1;
                }
                Elem::Mat { p: *p, n: *n, a }
            }
            Elem::Tuple(parts) => {
                Elem::Tuple(parts.iter().map(|e| e.identity_like()).collect())
            }
        }
    }

    pub fn mul(&self, other: &Elem) -> Elem {
        match (self, other) {
            (Elem::Perm(a), Elem::Perm(b)) => {
                assert_eq!(a.len(), b.len(), "permutation size mismatch");
                // (a·b)(x) = a(b(x)): apply b first.
                Elem::Perm(b.iter().map(|&x| a[x as usize]).collect())
            }
            (
                Elem::Mat { p, n, a },
                Elem::Mat {
                    p: p2,
                    n: n2,
                    a: b,
                },
            ) => {
                assert!(p == p2 && n == n2, "matrix shape mismatch");
                let n = *n;
                let mut c = vec![0u64; n * n];
                for i in 0..n {
                    for k in 0..n {
                        let aik = a[i * n + k];
                        if aik == 0 {
                            continue;
                        }
                        for j in 0..n {
                            c[i * n + j] = (c[i * n + j] + aik * b[k * n + j]) % p;
                        }
                    }
                }
                Elem::Mat { p: *p, n, a: c }
            }
            (Elem::Tuple(a), Elem::Tuple(b)) => {
                assert_eq!(a.len(), b.len(), "tuple arity mismatch");
                Elem::Tuple(a.iter().zip(b).map(|(x, y)| x.mul(y)).collect())
            }
            _ => panic!("mixed element kinds"),
        }
    }

    pub fn inv(&self) -> Elem {
        match self {
            Elem::Perm(v) => {
                let mut out = vec![0u8; v.len()];
                for (i, &img) in v.iter().enumerate() {
                    out[img as usize] = i as u8;
                }
                Elem::Perm(out)
            }
            Elem::Mat { p, n, a } => Elem::Mat {
                p: *p,
                n: *n,
                a: invert_matrix(a, *n, *p).expect("group element must be invertible"),
            },
            Elem::Tuple(parts) => Elem::Tuple(parts.iter().map(|e| e.inv()).collect()),
        }
    }

    /// Component of a tuple element.
    pub fn component(&self, i: usize) -> &Elem {
        match self {
            Elem::Tuple(parts) => &parts[i],
            _ => panic!("component() on a non-tuple element"),
        }
    }
}

/// Gauss–Jordan inverse mod p; `None` for singular input.
fn invert_matrix(a: &[u64], n: usize, p: u64) -> Option<Vec<u64>> {
    let mut m = a.to_vec();
    let mut inv = vec![0u64; n * n];
    for i in 0..n {
        inv[i * n + i] = 1;
    }
    for col in 0..n {
        let pivot = (col..n).find(|&r| m[r * n + col] != 0)?;
        if pivot != col {
            for j in 0..n {
                m.swap(col * n + j, pivot * n + j);
                inv.swap(col * n + j, pivot * n + j);
            }
        }
        let pinv = pow_mod(m[col * n + col], p - 2, p);
        for j in 0..n {
            m[col * n + j] = m[col * n + j] * pinv % p;
            inv[col * n + j] = inv[col * n + j] * pinv % p;
        }
        for r in 0..n {
            if r == col || m[r * n + col] == 0 {
                continue;
            }
            let f = m[r * n + col];
            for j in 0..n {
                m[r * n + j] = (m[r * n + j] + (p - f) * m[col * n + j]) % p;
                inv[r * n + j] = (inv[r * n + j] + (p - f) * inv[col * n + j]) % p;
            }
        }
    }
    Some(inv)
}

/// A finite group enumerated by BFS from its generators.
///
/// Element 0 is the identity; `words[i]` records how element `i` was
/// first reached (`parent index`, `generator index`), which lets
/// representations extend along the same spanning tree.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    elements: Vec<Elem>,
    index: HashMap<Elem, usize>,
    generators: Vec<Elem>,
    words: Vec<Option<(usize, usize)>>,
}

/// BFS closure of a generator list (deterministic insertion order).
///
/// An empty list yields the trivial permutation group on one point.
pub fn closure(generators: &[Elem]) -> Result<FiniteGroup, GroupError> {
    if generators.len() > GENERATOR_CAP {
        return Err(GroupError::TooManyGenerators);
    }
    let id = generators
        .first()
        .map(|g| g.identity_like())
        .unwrap_or(Elem::Perm(vec![0]));
    let mut elements = vec![id.clone()];
    let mut index = HashMap::new();
    index.insert(id, 0usize);
    let mut words: Vec<Option<(usize, usize)>> = vec![None];
    let mut head = 0usize;
    while head < elements.len() {
        for (gi, g) in generators.iter().enumerate() {
            let prod = elements[head].mul(g);
            if !index.contains_key(&prod) {
                if elements.len() >= ORDER_CAP {
                    return Err(GroupError::OrderCapExceeded);
                }
                index.insert(prod.clone(), elements.len());
                elements.push(prod);
                words.push(Some((head, gi)));
            }
        }
        head += 1;
    }
    Ok(FiniteGroup {
        elements,
        index,
        generators: generators.to_vec(),
        words,
    })
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity_idx(&self) -> usize {
        0
    }

    pub fn elem(&self, i: usize) -> &Elem {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn index_of(&self, e: &Elem) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn word(&self, i: usize) -> Option<(usize, usize)> {
        self.words[i]
    }

    pub fn mul_idx(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].mul(&self.elements[b])]
    }

    pub fn inv_idx(&self, a: usize) -> usize {
        self.index[&self.elements[a].inv()]
    }

    /// Explicit multiplication table for structural tests.
    pub fn to_table(&self) -> Result<SmallGroup, GroupError> {
        let n = self.order();
        if n > TABLE_CAP {
            return Err(GroupError::TableTooLarge(n));
        }
        let mut mul = vec![0usize; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = self.mul_idx(a, b);
            }
        }
        let inv = (0..n).map(|a| self.inv_idx(a)).collect();
        Ok(SmallGroup { n, mul, inv })
    }

    /// Subgroup (as sorted element indices) generated by `seed` indices,
    /// optionally closed under conjugation by the whole group's
    /// generators (normal closure).
    pub fn span(&self, seed: &[usize], normal: bool) -> Vec<usize> {
        let mut in_set = vec![false; self.order()];
        let mut stack: Vec<usize> = Vec::new();
        let push = |i: usize, in_set: &mut Vec<bool>, stack: &mut Vec<usize>| {
            if !in_set[i] {
                in_set[i] = true;
                stack.push(i);
            }
        };
        push(self.identity_idx(), &mut in_set, &mut stack);
        for &s in seed {
            push(s, &mut in_set, &mut stack);
        }
        let gen_idx: Vec<usize> = self
            .generators
            .iter()
            .map(|g| self.index[g])
            .collect();
        let mut members: Vec<usize> = Vec::new();
        while let Some(x) = stack.pop() {
            members.push(x);
            let snapshot: Vec<usize> = (0..self.order()).filter(|&i| in_set[i]).collect();
            for &y in &snapshot {
                push(self.mul_idx(x, y), &mut in_set, &mut stack);
                push(self.mul_idx(y, x), &mut in_set, &mut stack);
            }
            push(self.inv_idx(x), &mut in_set, &mut stack);
            if normal {
                for &g in &gen_idx {
                    let conj = self.mul_idx(self.mul_idx(g, x), self.inv_idx(g));
                    push(conj, &mut in_set, &mut stack);
                }
            }
        }
        members.sort_unstable();
        members.dedup();
        members
    }
}

/// A group given purely by its multiplication table.
#[derive(Debug, Clone)]
pub struct SmallGroup {
    pub n: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
}

impl SmallGroup {
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// Identity index (self-squaring fixed point of every row).
    pub fn identity(&self) -> usize {
        (0..self.n)
            .find(|&e| (0..self.n).all(|a| self.mul(e, a) == a))
            .expect("a group table has an identity")
    }

    /// Subgroup generated by `seed`; normal closure when `normal`.
    pub fn span(&self, seed: &[usize], normal: bool) -> Vec<usize> {
        let mut in_set = vec![false; self.n];
        let mut stack = Vec::new();
        let id = self.identity();
        in_set[id] = true;
        stack.push(id);
        for &s in seed {
            if !in_set[s] {
                in_set[s] = true;
                stack.push(s);
            }
        }
        while let Some(x) = stack.pop() {
            let current: Vec<usize> = (0..self.n).filter(|&i| in_set[i]).collect();
            for &y in current.iter() {
                for z in [self.mul(x, y), self.mul(y, x)] {
                    if !in_set[z] {
                        in_set[z] = true;
                        stack.push(z);
                    }
                }
            }
            let xi = self.inv(x);
            if !in_set[xi] {
                in_set[xi] = true;
                stack.push(xi);
            }
            if normal {
                for g in 0..self.n {
                    let c = self.mul(self.mul(g, x), self.inv(g));
                    if !in_set[c] {
                        in_set[c] = true;
                        stack.push(c);
                    }
                }
            }
        }
        let mut v: Vec<usize> = (0..self.n).filter(|&i| in_set[i]).collect();
        v.sort_unstable();
        v
    }

    /// Commutator subgroup: normal closure of all commutators.
    pub fn derived_subgroup(&self) -> Vec<usize> {
        let mut comms = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                let c = self.mul(
                    self.mul(a, b),
                    self.mul(self.inv(a), self.inv(b)),
                );
                comms.push(c);
            }
        }
        comms.sort_unstable();
        comms.dedup();
        self.span(&comms, true)
    }

    pub fn is_perfect(&self) -> bool {
        self.derived_subgroup().len() == self.n
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&z| (0..self.n).all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect()
    }

    /// Simplicity by normal closures: every nontrivial element must
    /// normally generate the whole group.
    pub fn is_simple(&self) -> bool {
        if self.n <= 1 {
            return false;
        }
        let id = self.identity();
        (0..self.n)
            .filter(|&x| x != id)
            .all(|x| self.span(&[x], true).len() == self.n)
    }

    /// Quotient by a normal subgroup, as a new table.
    pub fn quotient(&self, normal_sub: &[usize]) -> SmallGroup {
        let in_sub = {
            let mut v = vec![false; self.n];
            for &x in normal_sub {
                v[x] = true;
            }
            v
        };
        // Canonical coset labels: smallest element index in the coset.
        let mut coset_of = vec![usize::MAX; self.n];
        let mut reps: Vec<usize> = Vec::new();
        for x in 0..self.n {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let c = reps.len();
            for &h in normal_sub.iter() {
                coset_of[self.mul(x, h)] = c;
            }
            debug_assert!(coset_of[x] == c, "subgroup must contain the identity");
            let _ = in_sub;
            reps.push(x);
        }
        let m = reps.len();
        let mut mul = vec![0usize; m * m];
        for a in 0..m {
            for b in 0..m {
                mul[a * m + b] = coset_of[self.mul(reps[a], reps[b])];
            }
        }
        let inv = (0..m).map(|a| coset_of[self.inv(reps[a])]).collect();
        SmallGroup { n: m, mul, inv }
    }

    /// Quasisimple: perfect with simple central quotient.
    pub fn is_quasisimple(&self) -> bool {
        self.is_perfect() && self.quotient(&self.center()).is_simple()
    }
}

/// Convenience wrappers running the table-based tests on a
/// [`FiniteGroup`].
pub fn is_perfect(g: &FiniteGroup) -> Result<bool, GroupError> {
    Ok(g.to_table()?.is_perfect())
}

pub fn center(g: &FiniteGroup) -> Result<Vec<usize>, GroupError> {
    Ok(g.to_table()?.center())
}

pub fn is_simple(g: &FiniteGroup) -> Result<bool, GroupError> {
    Ok(g.to_table()?.is_simple())
}

pub fn is_quasisimple(g: &FiniteGroup) -> Result<bool, GroupError> {
    Ok(g.to_table()?.is_quasisimple())
}

/// Goursat data of a subgroup `G ⊆ G₁×G₂` with surjective projections:
/// the kernels `H₁ = {x : (x,1) ∈ G}`, `H₂ = {y : (1,y) ∈ G}` and the
/// coset pairing `φ : G₁/H₁ → G₂/H₂` realized by `G`.
#[derive(Debug, Clone)]
pub struct GoursatDatum {
    pub h1: Vec<Elem>,
    pub h2: Vec<Elem>,
    /// Pairs of coset representatives `(x, y)` with `φ(xH₁) = yH₂`.
    pub pairing: Vec<(Elem, Elem)>,
    pub quotient_order: usize,
}

/// Extract and verify the Goursat datum of `g ⊆ g1 × g2`.
pub fn goursat_datum(
    g: &FiniteGroup,
    g1: &FiniteGroup,
    g2: &FiniteGroup,
) -> Result<GoursatDatum, GroupError> {
    use std::collections::HashSet;

    // Surjectivity of both projections.
    let proj: Vec<(usize, usize)> = g
        .elements()
        .iter()
        .map(|e| {
            let x = g1
                .index_of(e.component(0))
                .ok_or(GroupError::NotSurjective)?;
            let y = g2
                .index_of(e.component(1))
                .ok_or(GroupError::NotSurjective)?;
            Ok((x, y))
        })
        .collect::<Result<_, GroupError>>()?;
    let im1: HashSet<usize> = proj.iter().map(|&(x, _)| x).collect();
    let im2: HashSet<usize> = proj.iter().map(|&(_, y)| y).collect();
    if im1.len() != g1.order() || im2.len() != g2.order() {
        return Err(GroupError::NotSurjective);
    }

    let id1 = g1.identity_idx();
    let id2 = g2.identity_idx();
    let h1_idx: Vec<usize> = proj
        .iter()
        .filter(|&&(_, y)| y == id2)
        .map(|&(x, _)| x)
        .collect();
    let h2_idx: Vec<usize> = proj
        .iter()
        .filter(|&&(x, _)| x == id1)
        .map(|&(_, y)| y)
        .collect();

    // Coset labels in G₁/H₁ and G₂/H₂.
    let coset_label = |factor: &FiniteGroup, sub: &[usize]| -> Vec<usize> {
        let mut label = vec![usize::MAX; factor.order()];
        let mut next = 0usize;
        for x in 0..factor.order() {
            if label[x] != usize::MAX {
                continue;
            }
            for &h in sub {
                label[factor.mul_idx(x, h)] = next;
            }
            next += 1;
        }
        label
    };
    let l1 = coset_label(g1, &h1_idx);
    let l2 = coset_label(g2, &h2_idx);

    // The pairing: each coset of H₁ must map to exactly one coset of H₂.
    let n1 = *l1.iter().max().unwrap() + 1;
    let n2 = *l2.iter().max().unwrap() + 1;
    let mut phi = vec![usize::MAX; n1];
    let mut rep_pair: Vec<Option<(usize, usize)>> = vec![None; n1];
    for &(x, y) in &proj {
        let (cx, cy) = (l1[x], l2[y]);
        if phi[cx] == usize::MAX {
            phi[cx] = cy;
            rep_pair[cx] = Some((x, y));
        } else if phi[cx] != cy {
            return Err(GroupError::PreconditionFailed(
                "coset pairing not well-defined".into(),
            ));
        }
    }
    let mut seen = vec![false; n2];
    for &c in &phi {
        if c == usize::MAX || seen[c] {
            return Err(GroupError::PreconditionFailed(
                "coset pairing not bijective".into(),
            ));
        }
        seen[c] = true;
    }

    // Lemma inclusions: H₁×H₂ ⊆ G and G ⊆ {(x,y) : φ(xH₁) = yH₂}.
    for &x in &h1_idx {
        for &y in &h2_idx {
            let pair = Elem::Tuple(vec![g1.elem(x).clone(), g2.elem(y).clone()]);
            if g.index_of(&pair).is_none() {
                return Err(GroupError::PreconditionFailed(
                    "H1 x H2 escapes G".into(),
                ));
            }
        }
    }
    // (G ⊆ graph of φ was enforced while building φ.)

    Ok(GoursatDatum {
        h1: h1_idx.iter().map(|&i| g1.elem(i).clone()).collect(),
        h2: h2_idx.iter().map(|&i| g2.elem(i).clone()).collect(),
        pairing: rep_pair
            .into_iter()
            .map(|p| {
                let (x, y) = p.expect("all cosets paired");
                (g1.elem(x).clone(), g2.elem(y).clone())
            })
            .collect(),
        quotient_order: n1,
    })
}

/// Verdict of the commuting-subgroups check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CommuteVerdict {
    Commute,
    /// `N ⊆ M`: the lemma is silent.
    NotApplicable,
    /// Indices of a non-commuting pair (would falsify the setup).
    Counterexample(usize, usize),
}

/// For normal `M`, `N` with `N` quasisimple and `N ⊄ M`, verify
/// elementwise that `[m, n] = 1`.
pub fn commute_witness(
    g: &FiniteGroup,
    m_sub: &[usize],
    n_sub: &[usize],
) -> Result<CommuteVerdict, GroupError> {
    let table = g.to_table()?;
    let is_normal = |sub: &[usize]| -> bool {
        let members: std::collections::HashSet<usize> = sub.iter().copied().collect();
        sub.iter().all(|&x| {
            (0..table.n).all(|h| {
                members.contains(&table.mul(table.mul(h, x), table.inv(h)))
            })
        })
    };
    if !is_normal(m_sub) || !is_normal(n_sub) {
        return Err(GroupError::NotNormal);
    }
    // N as a standalone table, via the restriction of the multiplication.
    let pos: HashMap<usize, usize> = n_sub.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let nn = n_sub.len();
    let mut mul = vec![0usize; nn * nn];
    for (i, &x) in n_sub.iter().enumerate() {
        for (j, &y) in n_sub.iter().enumerate() {
            mul[i * nn + j] = pos[&table.mul(x, y)];
        }
    }
    let inv = n_sub.iter().map(|&x| pos[&table.inv(x)]).collect();
    let n_group = SmallGroup { n: nn, mul, inv };
    if !n_group.is_quasisimple() {
        return Err(GroupError::NotQuasisimple);
    }
    let m_set: std::collections::HashSet<usize> = m_sub.iter().copied().collect();
    if n_sub.iter().all(|x| m_set.contains(x)) {
        return Ok(CommuteVerdict::NotApplicable);
    }
    for &m in m_sub {
        for &n in n_sub {
            if table.mul(m, n) != table.mul(n, m) {
                return Ok(CommuteVerdict::Counterexample(m, n));
            }
        }
    }
    Ok(CommuteVerdict::Commute)
}
