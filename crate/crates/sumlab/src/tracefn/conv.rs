//! Multiplicative convolution on `F^×` via the discrete-log domain.
//!
//! A function supported on `F^×` becomes a cyclic sequence `a[k] = f(g^k)`
//! of length `L = |F| − 1`; multiplicative convolution of functions is
//! cyclic convolution of sequences.  The direct `O(L²)` loop is the
//! baseline everything is tested against; with the `accel` feature an FFT
//! path is used for long sequences and must agree to 1e−9.

use crate::ffield::Field;
use crate::C64;

/// Sequence length above which the FFT path (if compiled in) takes over.
#[cfg(feature = "accel")]
const FFT_THRESHOLD: usize = 256;

/// Tabulate a function of `F^×` in the dlog domain.
pub fn to_dlog_domain<F: Field>(f: &F, func: impl Fn(u64) -> C64) -> Vec<C64> {
    (0..f.order() - 1).map(|k| func(f.gen_pow(k))).collect()
}

/// Expand a dlog-domain sequence to a value table on `F` (0 at 0).
pub fn from_dlog_domain<F: Field>(f: &F, a: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); f.order() as usize];
    for (k, &v) in a.iter().enumerate() {
        out[f.gen_pow(k as u64) as usize] = v;
    }
    out
}

/// Cyclic convolution, direct `O(L²)` reference path.
pub fn cyclic_convolve_direct(a: &[C64], b: &[C64]) -> Vec<C64> {
    let l = a.len();
    assert_eq!(l, b.len());
    let mut out = vec![C64::new(0.0, 0.0); l];
    for (i, &ai) in a.iter().enumerate() {
        if ai == C64::new(0.0, 0.0) {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            let k = i + j;
            let k = if k >= l { k - l } else { k };
            out[k] += ai * bj;
        }
    }
    out
}

/// Cyclic convolution by FFT (arbitrary length).
#[cfg(feature = "accel")]
pub fn cyclic_convolve_fft(a: &[C64], b: &[C64]) -> Vec<C64> {
    use rustfft::FftPlanner;
    let l = a.len();
    assert_eq!(l, b.len());
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(l);
    let inv = planner.plan_fft_inverse(l);
    let mut fa: Vec<C64> = a.to_vec();
    let mut fb: Vec<C64> = b.to_vec();
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(fb.iter()) {
        *x *= y;
    }
    inv.process(&mut fa);
    let scale = 1.0 / l as f64;
    fa.iter_mut().for_each(|x| *x *= scale);
    fa
}

/// Cyclic convolution with the configured strategy.
pub fn cyclic_convolve(a: &[C64], b: &[C64]) -> Vec<C64> {
    #[cfg(feature = "accel")]
    if a.len() >= FFT_THRESHOLD {
        return cyclic_convolve_fft(a, b);
    }
    cyclic_convolve_direct(a, b)
}

/// Fold a nonempty list of dlog-domain factors by convolution.
pub fn convolve_all(factors: &[Vec<C64>]) -> Vec<C64> {
    let mut acc = factors[0].clone();
    for f in &factors[1..] {
        acc = cyclic_convolve(&acc, f);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::PrimeFieldCtx;

    #[test]
    fn direct_convolution_matches_definition() {
        // Multiplicative convolution oracle: (f*g)(u) = Σ_{xy=u} f(x)g(y).
        let ctx = PrimeFieldCtx::new(11).unwrap();
        let f = |x: u64| C64::new(x as f64, 1.0);
        let g = |x: u64| C64::new(1.0, -(x as f64));
        let a = to_dlog_domain(&ctx, f);
        let b = to_dlog_domain(&ctx, g);
        let conv = from_dlog_domain(&ctx, &cyclic_convolve_direct(&a, &b));
        for u in 1..11u64 {
            let mut oracle = C64::new(0.0, 0.0);
            for x in 1..11u64 {
                let y = u * crate::ffield::Field::inv(&ctx, x) % 11;
                oracle += f(x) * g(y);
            }
            assert!((conv[u as usize] - oracle).norm() < 1e-9);
        }
    }

    #[cfg(feature = "accel")]
    #[test]
    fn fft_agrees_with_direct() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for l in [5usize, 256, 1009] {
            let a: Vec<C64> = (0..l)
                .map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                .collect();
            let b: Vec<C64> = (0..l)
                .map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                .collect();
            let d = cyclic_convolve_direct(&a, &b);
            let f = cyclic_convolve_fft(&a, &b);
            for (x, y) in d.iter().zip(f.iter()) {
                assert!((x - y).norm() < 1e-9);
            }
        }
    }
}
