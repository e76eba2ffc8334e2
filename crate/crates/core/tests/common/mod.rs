#![allow(dead_code)]

use insitu_fft::{dft_naive, Complex64, Direction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

pub fn random_real(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Row transforms then column transforms, each by direct DFT summation.
pub fn naive_2d(data: &[Complex64], ny0: usize, ny1: usize, dir: Direction) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = data
        .chunks(ny1)
        .flat_map(|row| dft_naive(row, dir).unwrap())
        .collect();
    for j in 0..ny1 {
        let col: Vec<_> = (0..ny0).map(|i| out[i * ny1 + j]).collect();
        for (i, v) in dft_naive(&col, dir).unwrap().into_iter().enumerate() {
            out[i * ny1 + j] = v;
        }
    }
    out
}

pub fn l2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn sup_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Sup-norm of the difference, scaled by the input's 2-norm.
pub fn rel_sup(a: &[Complex64], b: &[Complex64], input: &[Complex64]) -> f64 {
    sup_diff(a, b) / l2(input).max(f64::MIN_POSITIVE)
}

pub const ORACLE_SIZES: [usize; 19] = [
    1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 20, 25, 32,
];
