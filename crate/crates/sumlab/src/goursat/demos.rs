//! Shipped demonstration groups and representations, plus a serializable
//! structural certificate for each.

use super::rep::{coinvariant_dim, MatrixRep};
use super::{closure, goursat_datum, Elem, FiniteGroup, GroupError};
use crate::C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Z/n as the cyclic permutation group generated by an n-cycle.
pub fn cyclic(n: usize) -> FiniteGroup {
    assert!(n >= 1 && n <= 255);
    let mut v: Vec<u8> = (1..n as u8).collect();
    v.push(0);
    closure(&[Elem::Perm(v)]).expect("cyclic group fits the cap")
}

/// A₅, generated by a 3-cycle and a 5-cycle.
pub fn alternating5() -> FiniteGroup {
    closure(&[
        Elem::Perm(vec![1, 2, 0, 3, 4]),
        Elem::Perm(vec![1, 2, 3, 4, 0]),
    ])
    .expect("A5 fits the cap")
}

/// S₅, generated by a transposition and a 5-cycle.
pub fn symmetric5() -> FiniteGroup {
    closure(&[
        Elem::Perm(vec![1, 0, 2, 3, 4]),
        Elem::Perm(vec![1, 2, 3, 4, 0]),
    ])
    .expect("S5 fits the cap")
}

/// SL₂(F_p), generated by the shear `T = [[1,1],[0,1]]` and the
/// rotation `S = [[0,-1],[1,0]]`.
pub fn sl2(p: u64) -> FiniteGroup {
    closure(&[
        Elem::Mat {
            p,
            n: 2,
            a: vec![1, 1, 0, 1],
        },
        Elem::Mat {
            p,
            n: 2,
            a: vec![0, p - 1, 1, 0],
        },
    ])
    .expect("SL2(p) fits the cap for small p")
}

/// The 4-dimensional standard representation of A₅ (or S₅): the action
/// on the sum-zero subspace of C⁵ in the basis `b_i = e_i − e_4`.
fn perm_to_std4(perm: &[u8]) -> Vec<C64> {
    assert_eq!(perm.len(), 5);
    let mut m = vec![C64::new(0.0, 0.0); 16];
    let drop = perm[4] as usize;
    for c in 0..4 {
        let img = perm[c] as usize;
        if img < 4 {
            m[img * 4 + c] += C64::new(1.0, 0.0);
        }
        if drop < 4 {
            m[drop * 4 + c] -= C64::new(1.0, 0.0);
        }
    }
    m
}

/// Build the standard 4-dimensional representation on a permutation
/// group over 5 points (A₅ or S₅).
pub fn std4_of_a5(g: &FiniteGroup) -> Result<MatrixRep, GroupError> {
    let images: Vec<Vec<C64>> = g
        .generators()
        .iter()
        .map(|e| match e {
            Elem::Perm(v) => perm_to_std4(v),
            _ => panic!("std4 needs a permutation group on 5 points"),
        })
        .collect();
    MatrixRep::from_generator_images(g, &images, 4)
}

/// One of the two faithful 2-dimensional representations of SL₂(F₅),
/// realized inside SU(2).
///
/// `T` maps to `diag(ζ₅^a, ζ₅^{−a})` and `S` to a traceless unitary;
/// the finitely many sign/exponent choices are searched and the first
/// assignment that verifies as multiplicative on the whole group is
/// returned.
pub fn sl2_5_std2(g: &FiniteGroup) -> Result<MatrixRep, GroupError> {
    let zero = C64::new(0.0, 0.0);
    for a in [1u32, 2] {
        let theta = 2.0 * PI * a as f64 / 5.0;
        let zeta = C64::new(theta.cos(), theta.sin());
        for t in [1.0f64, -1.0] {
            let y = -t / (2.0 * theta.sin());
            if y * y > 1.0 {
                continue;
            }
            let b = (1.0 - y * y).sqrt();
            let rho_t = vec![zeta, zero, zero, zeta.conj()];
            let rho_s = vec![
                C64::new(0.0, y),
                C64::new(b, 0.0),
                C64::new(-b, 0.0),
                C64::new(0.0, -y),
            ];
            if let Ok(rep) = MatrixRep::from_generator_images(g, &[rho_t, rho_s], 2) {
                return Ok(rep);
            }
        }
    }
    Err(GroupError::NotMultiplicative)
}

/// Summary of the Goursat datum of the diagonal copy of `G` in `G×G`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatumSummary {
    pub h1_order: usize,
    pub h2_order: usize,
    pub quotient_order: usize,
}

/// Serializable structural certificate of a demonstration group.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    pub group: String,
    pub order: usize,
    pub perfect: bool,
    pub center_order: usize,
    pub simple: bool,
    pub quasisimple: bool,
    /// Goursat datum of the diagonal in `G×G`.
    pub diagonal_datum: DatumSummary,
    /// Labelled coinvariant dimensions of shipped tensor squares.
    pub coinvariant_dims: Vec<(String, i64)>,
}

fn diagonal_datum(g: &FiniteGroup) -> Result<DatumSummary, GroupError> {
    let gens: Vec<Elem> = g
        .generators()
        .iter()
        .map(|x| Elem::Tuple(vec![x.clone(), x.clone()]))
        .collect();
    let diag = closure(&gens)?;
    let d = goursat_datum(&diag, g, g)?;
    Ok(DatumSummary {
        h1_order: d.h1.len(),
        h2_order: d.h2.len(),
        quotient_order: d.quotient_order,
    })
}

/// Compute the certificate for one of the named demonstration groups:
/// `"z6"`, `"a5"`, `"s5"`, `"sl2_3"`, `"sl2_5"`.
pub fn certificate(name: &str) -> Result<Certificate, GroupError> {
    let g = match name {
        "z6" => cyclic(6),
        "a5" => alternating5(),
        "s5" => symmetric5(),
        "sl2_3" => sl2(3),
        "sl2_5" => sl2(5),
        other => {
            return Err(GroupError::PreconditionFailed(format!(
                "unknown demo group {other:?}"
            )))
        }
    };
    let table = g.to_table()?;
    let mut coinv: Vec<(String, i64)> = Vec::new();
    match name {
        "a5" => {
            let std4 = std4_of_a5(&g)?;
            let dual = std4.dual(&g);
            coinv.push((
                "std4 (x) std4-dual".into(),
                coinvariant_dim(&g, &[&std4, &dual])?,
            ));
            coinv.push(("std4 (x) std4".into(), coinvariant_dim(&g, &[&std4, &std4])?));
        }
        "sl2_5" => {
            let std2 = sl2_5_std2(&g)?;
            let dual = std2.dual(&g);
            coinv.push((
                "std2 (x) std2-dual".into(),
                coinvariant_dim(&g, &[&std2, &dual])?,
            ));
            coinv.push(("std2 (x) std2".into(), coinvariant_dim(&g, &[&std2, &std2])?));
        }
        _ => {}
    }
    Ok(Certificate {
        group: name.to_string(),
        order: g.order(),
        perfect: table.is_perfect(),
        center_order: table.center().len(),
        simple: table.is_simple(),
        quasisimple: table.is_quasisimple(),
        diagonal_datum: diagonal_datum(&g)?,
        coinvariant_dims: coinv,
    })
}
