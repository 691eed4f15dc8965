//! Seeded test matrices with certified spectral gaps.
#![allow(dead_code)]

pub mod props;

use natpow::linalg::rng::{gaussian_matrix, seeded, Rng};
use natpow::linalg::{random_conditioned, random_orthogonal, DenseMatrix};
use natpow::mor::LtiSystem;
use rand::Rng as _;

/// `S diag(lambda) S^{-1}` with `cond(S) <= 4`.
pub struct GapMatrix {
    pub a: DenseMatrix,
    /// Real eigenvalues, descending in modulus.
    pub eigenvalues: Vec<f64>,
    /// Columns are the eigenvectors matching `eigenvalues`.
    pub eigenvectors: DenseMatrix,
}

/// Real spectrum with `|lambda_i| in [0.7, 1]` for `i <= r` and
/// `|lambda_i| in [0.1, 0.45]` beyond, random signs.
pub fn gap_matrix(rng: &mut Rng, n: usize, r: usize) -> GapMatrix {
    let mut lambdas: Vec<f64> = (0..n)
        .map(|i| {
            let modulus = if i < r { rng.random_range(0.7..=1.0) } else { rng.random_range(0.1..=0.45) };
            if rng.random_bool(0.5) { modulus } else { -modulus }
        })
        .collect();
    lambdas.sort_by(|x, y| y.abs().total_cmp(&x.abs()));
    let s = random_conditioned(rng, n, 0.5, 2.0);
    let d = DenseMatrix::from_diagonal(&lambdas).unwrap();
    let a = &(&s * &d) * &s.inverse().unwrap();
    GapMatrix { a, eigenvalues: lambdas, eigenvectors: s }
}

pub fn gap_matrix_seeded(seed: u64, n: usize, r: usize) -> GapMatrix {
    gap_matrix(&mut seeded(seed), n, r)
}

/// Symmetric positive definite `Q diag(lambda) Q'` with
/// `lambda_{r+1} / lambda_r = ratio`; eigenvalues descending.
pub fn spd_with_gap(rng: &mut Rng, n: usize, r: usize, ratio: f64) -> (DenseMatrix, Vec<f64>) {
    let mut top: Vec<f64> = (0..r).map(|_| rng.random_range(1.0..=2.0)).collect();
    top.sort_by(|x, y| y.total_cmp(x));
    let lr = top[r - 1];
    let mut lambdas = top;
    if r < n {
        lambdas.push(ratio * lr);
        let mut rest: Vec<f64> = (r + 1..n).map(|_| rng.random_range(0.05..=ratio * lr)).collect();
        rest.sort_by(|x, y| y.total_cmp(x));
        lambdas.extend(rest);
    }
    let q = random_orthogonal(rng, n);
    let d = DenseMatrix::from_diagonal(&lambdas).unwrap();
    ((&(&q * &d) * &q.transpose()).symmetrized(), lambdas)
}

/// Gap system of order `3..=8` with one or two inputs and outputs, and the
/// reduction order `r` at which the gap sits.
pub fn gap_system(seed: u64) -> (LtiSystem, usize, GapMatrix) {
    let mut rng = seeded(seed);
    let n = rng.random_range(3..=8);
    let r = rng.random_range(1..n);
    let g = gap_matrix(&mut rng, n, r);
    let m = rng.random_range(1..=2);
    let p = rng.random_range(1..=2);
    let b = gaussian_matrix(&mut rng, n, m);
    let c = gaussian_matrix(&mut rng, p, n);
    (LtiSystem::new(g.a.clone(), b, c).unwrap(), r, g)
}

/// Orthogonal projector onto the span of the first `m` columns of `v`.
pub fn column_projector(v: &DenseMatrix, m: usize) -> DenseMatrix {
    natpow::StiefelFrame::orthonormalize(&v.columns(0, m)).unwrap().projector_matrix()
}
