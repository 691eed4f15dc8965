//! Seeded randomness.
//!
//! Every random quantity in the crate is drawn from ChaCha8 seeded through
//! `SeedableRng::seed_from_u64`, so a `u64` seed fully determines the output.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::factor::qr_thin;
use super::matrix::{DenseMatrix, StiefelFrame};

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix of independent standard normal entries, filled row by row.
pub fn gaussian_matrix(rng: &mut Rng, rows: usize, cols: usize) -> DenseMatrix {
    let data: Vec<f64> = (0..rows * cols).map(|_| StandardNormal.sample(rng)).collect();
    DenseMatrix::new(rows, cols, data).expect("gaussian entries are finite")
}

/// Haar-distributed frame from the sign-fixed QR of a Gaussian matrix.
pub fn random_stiefel_from(rng: &mut Rng, n: usize, r: usize) -> StiefelFrame {
    assert!(n >= r && r >= 1, "random_stiefel needs n >= r >= 1");
    loop {
        let g = gaussian_matrix(rng, n, r);
        if let Ok((q, _)) = qr_thin(&g) {
            return q;
        }
    }
}

pub fn random_stiefel(n: usize, r: usize, seed: u64) -> StiefelFrame {
    random_stiefel_from(&mut seeded(seed), n, r)
}

/// Haar-distributed `n x n` orthogonal matrix.
pub fn random_orthogonal(rng: &mut Rng, n: usize) -> DenseMatrix {
    random_stiefel_from(rng, n, n).into_matrix()
}

/// `Q diag(s) P'` with Haar `Q`, `P` and singular values drawn uniformly
/// from `[sigma_min, sigma_max]`, so the condition number is bounded by
/// `sigma_max / sigma_min`.
pub fn random_conditioned(rng: &mut Rng, n: usize, sigma_min: f64, sigma_max: f64) -> DenseMatrix {
    assert!(0.0 < sigma_min && sigma_min <= sigma_max, "need 0 < sigma_min <= sigma_max");
    let q = random_orthogonal(rng, n);
    let p = random_orthogonal(rng, n);
    let s: Vec<f64> = (0..n).map(|_| rng.random_range(sigma_min..=sigma_max)).collect();
    let d = DenseMatrix::from_diagonal(&s).expect("finite");
    &(&q * &d) * &p.transpose()
}
