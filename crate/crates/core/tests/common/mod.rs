#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ssflab_core::matrix::DenseMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Symmetric matrix with entries uniform in `[-1, 1]`.
pub fn random_symmetric<R: Rng>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rng.random_range(-1.0..1.0);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// Diagonal with `rank` random positions set to values in `(0, scale]`.
pub fn random_nonneg_diagonal<R: Rng>(rng: &mut R, n: usize, rank: usize, scale: f64) -> Vec<f64> {
    let mut d = vec![0.0; n];
    let mut placed = 0;
    while placed < rank {
        let i = rng.random_range(0..n);
        if d[i] == 0.0 {
            d[i] = scale * (1.0 - rng.random::<f64>());
            placed += 1;
        }
    }
    d
}

pub fn dense(m: DMatrix<f64>) -> DenseMatrix {
    DenseMatrix::Real(m)
}
