//! Finite-horizon Gramians and Krylov ranks.

use crate::linalg::{numerical_rank, DenseMatrix};

/// Relative singular-value cutoff for Krylov ranks.
pub const KRYLOV_RANK_TOL: f64 = 1e-10;

/// `sum_{i=0}^{horizon-1} A^i B B' (A')^i`.
pub fn reachability_gramian(a: &DenseMatrix, b: &DenseMatrix, horizon: usize) -> DenseMatrix {
    let mut term = b.clone();
    let mut sum = DenseMatrix::zeros(a.rows(), a.rows());
    for i in 0..horizon {
        if i > 0 {
            term = a * &term;
        }
        sum = &sum + &(&term * &term.transpose());
    }
    sum.symmetrized()
}

/// `sum_{i=0}^{horizon-1} (A')^i C' C A^i`.
pub fn observability_gramian(a: &DenseMatrix, c: &DenseMatrix, horizon: usize) -> DenseMatrix {
    reachability_gramian(&a.transpose(), &c.transpose(), horizon)
}

/// `[B, AB, ..., A^{n-1}B]`.
pub fn krylov_matrix(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let mut k = b.clone();
    let mut block = b.clone();
    for _ in 1..a.rows() {
        block = a * &block;
        k = k.hstack(&block).expect("conforming blocks");
    }
    k
}

/// Dimension of the reachable subspace of `(A, B)`.
pub fn staircase_rank(a: &DenseMatrix, b: &DenseMatrix) -> usize {
    numerical_rank(&krylov_matrix(a, b), KRYLOV_RANK_TOL)
}

/// Dimension of the observable subspace of `(A, C)`.
pub fn observability_rank(a: &DenseMatrix, c: &DenseMatrix) -> usize {
    staircase_rank(&a.transpose(), &c.transpose())
}
