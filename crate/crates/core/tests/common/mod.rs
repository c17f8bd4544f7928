#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use scatter_depth::linalg::symmetric_eigen;
use scatter_depth::Matrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..d).map(|_| rng.sample(StandardNormal)).collect()).collect()
}

pub fn gaussian_matrix(rng: &mut ChaCha8Rng, d: usize) -> Matrix {
    let data = (0..d * d).map(|_| rng.sample(StandardNormal)).collect();
    Matrix::new(d, d, data).unwrap()
}

/// Random nonsingular matrix with 2-norm condition number at most `max_cond`.
pub fn well_conditioned(rng: &mut ChaCha8Rng, d: usize, max_cond: f64) -> Matrix {
    loop {
        let a = gaussian_matrix(rng, d);
        let (vals, _) = symmetric_eigen(&a.transpose().matmul(&a).unwrap()).unwrap();
        if vals[0] > 0.0 && (vals[d - 1] / vals[0]).sqrt() <= max_cond {
            return a;
        }
    }
}

/// Random symmetric positive definite matrix `B Bᵀ + I/2`.
pub fn random_spd(rng: &mut ChaCha8Rng, d: usize) -> Matrix {
    let b = gaussian_matrix(rng, d);
    let mut s = b.matmul(&b.transpose()).unwrap();
    for i in 0..d {
        s.set(i, i, s.get(i, i) + 0.5);
    }
    s
}

pub fn apply(a: &Matrix, x: &[f64], b: &[f64]) -> Vec<f64> {
    a.mul_vec(x).unwrap().iter().zip(b).map(|(p, q)| p + q).collect()
}

pub fn depth_one() -> Vec<Vec<f64>> {
    vec![vec![1.5, 0.0], vec![0.0, 1.5], vec![0.5, 0.0], vec![0.0, 0.5]]
}

pub fn cross() -> Vec<Vec<f64>> {
    vec![vec![2.0, 0.0], vec![-2.0, 0.0], vec![0.0, 2.0], vec![0.0, -2.0]]
}
