//! Cancellation surveys: evaluate `Σ_I` over random and
//! permutation-diagonal shift tuples, bucket the magnitudes against the
//! calibrated ladder, and report the growth exponent of each value.

use super::{random_tuple, sigma_i, TupleParams};
use crate::config::Calibration;
use crate::ffield::Field;
use crate::tracefn::TraceTable;
use crate::C64;
use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// One surveyed tuple.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SurveyRow {
    pub v: Vec<u64>,
    pub value: C64,
    pub abs: f64,
    /// `log_q |Σ_I|` (−∞ for an exact zero).
    pub exponent: f64,
    /// Index into the bucket ladder (0 = smallest).
    pub bucket: usize,
    /// Second half of `v` is a permutation of the first.
    pub diagonal: bool,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct SurveyReport {
    pub q: u64,
    pub kernel: String,
    pub l: usize,
    pub c: i64,
    pub seed: u64,
    pub thresholds: [f64; 3],
    pub bucket_counts: [u64; 4],
    pub diag_bucket_counts: [u64; 4],
    pub n_random: usize,
    pub n_diagonal: usize,
    pub rows: Vec<SurveyRow>,
}

/// Bucket ladder for `Σ_I`: multiples of `q`, `q^{3/2}`, `q²`.
pub fn sigma1_thresholds(cal: &Calibration, q: u64) -> [f64; 3] {
    let qf = q as f64;
    [
        cal.c_q * qf,
        cal.c_q32 * qf.powf(1.5),
        cal.c_q2 * qf * qf,
    ]
}

/// Bucket ladder for `Σ_II`: multiples of `q^{3/2}`, `q²`, `q³`.
pub fn sigma2_thresholds(cal: &Calibration, q: u64) -> [f64; 3] {
    let qf = q as f64;
    [
        cal.c_q32 * qf.powf(1.5),
        cal.c_q2 * qf * qf,
        cal.c_q2 * qf * qf * qf,
    ]
}

/// Index of the first threshold at or above `abs` (3 = above all).
pub fn bucket_of(abs: f64, thresholds: &[f64; 3]) -> usize {
    thresholds.iter().position(|&t| abs <= t).unwrap_or(3)
}

/// Survey `Σ_I` over `n_random` uniform tuples and `n_diagonal`
/// permutation-diagonal tuples (random first half, shuffled second half),
/// all drawn from one seeded stream so reruns reproduce byte-for-byte.
pub fn diagonal_survey<F: Field + Sync>(
    field: &F,
    k: &TraceTable,
    l: usize,
    c: i64,
    n_random: usize,
    n_diagonal: usize,
    seed: u64,
    cal: &Calibration,
) -> SurveyReport {
    let q = field.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tuples: Vec<Vec<u64>> = Vec::with_capacity(n_random + n_diagonal);
    for _ in 0..n_random {
        tuples.push(random_tuple(&mut rng, q, 2 * l));
    }
    for _ in 0..n_diagonal {
        let half = random_tuple(&mut rng, q, l);
        let mut second = half.clone();
        second.shuffle(&mut rng);
        let mut v = half;
        v.extend(second);
        tuples.push(v);
    }

    let thresholds = sigma1_thresholds(cal, q);
    let logq = (q as f64).ln();
    let rows: Vec<SurveyRow> = tuples
        .into_par_iter()
        .map(|v| {
            let p = TupleParams::new(l, c, 1, v.clone()).expect("valid tuple");
            let value = sigma_i(field, k, &p);
            let abs = value.norm();
            let exponent = if abs > 0.0 {
                abs.ln() / logq
            } else {
                f64::NEG_INFINITY
            };
            SurveyRow {
                diagonal: p.is_diagonal(),
                bucket: bucket_of(abs, &thresholds),
                v,
                value,
                abs,
                exponent,
            }
        })
        .collect();

    let mut bucket_counts = [0u64; 4];
    let mut diag_bucket_counts = [0u64; 4];
    for row in &rows {
        bucket_counts[row.bucket] += 1;
        if row.diagonal {
            diag_bucket_counts[row.bucket] += 1;
        }
    }
    SurveyReport {
        q,
        kernel: k.label.clone(),
        l,
        c,
        seed,
        thresholds,
        bucket_counts,
        diag_bucket_counts,
        n_random,
        n_diagonal,
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::PrimeFieldCtx;
    use crate::tracefn::builders::kloosterman;

    #[test]
    fn bucket_boundaries() {
        let t = [10.0, 100.0, 1000.0];
        assert_eq!(bucket_of(0.0, &t), 0);
        assert_eq!(bucket_of(10.0, &t), 0);
        assert_eq!(bucket_of(10.5, &t), 1);
        assert_eq!(bucket_of(100.0, &t), 1);
        assert_eq!(bucket_of(999.0, &t), 2);
        assert_eq!(bucket_of(1001.0, &t), 3);
    }

    #[test]
    fn survey_is_reproducible() {
        let ctx = PrimeFieldCtx::new(31).unwrap();
        let k = kloosterman(&ctx, 2);
        let cal = Calibration::default();
        let a = diagonal_survey(&ctx, &k, 1, 1, 4, 2, 99, &cal);
        let b = diagonal_survey(&ctx, &k, 1, 1, 4, 2, 99, &cal);
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            assert_eq!(ra.v, rb.v);
            assert_eq!(ra.value, rb.value);
        }
        assert_eq!(a.bucket_counts, b.bucket_counts);
    }

    #[test]
    fn diagonal_rows_dominate_random_ones() {
        let ctx = PrimeFieldCtx::new(101).unwrap();
        let k = kloosterman(&ctx, 2);
        let cal = Calibration::default();
        let rep = diagonal_survey(&ctx, &k, 2, 1, 5, 5, 7, &cal);
        assert_eq!(rep.rows.len(), 10);

        let diag: Vec<&SurveyRow> = rep.rows.iter().filter(|r| r.diagonal).collect();
        let rand: Vec<&SurveyRow> = rep.rows.iter().filter(|r| !r.diagonal).collect();
        assert!(diag.len() >= 5, "constructed diagonals must be flagged");
        // Diagonal Σ_I grows like q²: exponent comfortably above 3/2.
        for r in &diag {
            assert!(r.exponent > 1.5, "diagonal exponent {} too small", r.exponent);
        }
        // Off-diagonal values cancel: strictly smaller on average.
        let mean = |rows: &[&SurveyRow]| {
            rows.iter().map(|r| r.abs).sum::<f64>() / rows.len() as f64
        };
        assert!(mean(&rand) < mean(&diag));
    }
}
