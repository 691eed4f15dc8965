//! Thin QR, symmetric eigendecomposition and the functions built on them.

use nalgebra::{Complex, DMatrix};

use super::matrix::{DenseMatrix, StiefelFrame};
use crate::error::{Error, Result};

/// Default relative eigenvalue floor for [`inv_sqrt_spd`].
pub const DEFAULT_FLOOR: f64 = 1e-12;

/// Relative asymmetry accepted by [`sym_eig`].
pub const SYMMETRY_TOL: f64 = 1e-10;

const RANK_TOL: f64 = 1e-12;

/// Thin QR factorization `M = Q R` with `diag(R) >= 0`.
pub fn qr_thin(m: &DenseMatrix) -> Result<(StiefelFrame, DenseMatrix)> {
    let (n, r) = m.shape();
    if n < r {
        return Err(Error::Shape(format!("qr_thin needs n >= r, got {n}x{r}")));
    }
    let qr = m.as_na().clone().qr();
    let mut q = qr.q();
    let mut rr = qr.r();
    let scale = m.frobenius_norm();
    for j in 0..r {
        if rr[(j, j)] < 0.0 {
            rr.row_mut(j).neg_mut();
            q.column_mut(j).neg_mut();
        }
        let pivot = rr[(j, j)];
        if pivot <= RANK_TOL * scale {
            return Err(Error::RankDeficient { column: j, pivot });
        }
    }
    Ok((
        StiefelFrame::new_unchecked(DenseMatrix::wrap(q)),
        DenseMatrix::wrap(rr),
    ))
}

/// Eigendecomposition of a symmetric matrix, `S = V diag(values) V'`.
#[derive(Debug, Clone)]
pub struct SymEig {
    /// Descending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, each with its largest-magnitude
    /// entry positive.
    pub vectors: DenseMatrix,
}

pub fn sym_eig(s: &DenseMatrix) -> Result<SymEig> {
    if !s.is_square() {
        return Err(Error::Shape(format!("sym_eig of {}x{}", s.rows(), s.cols())));
    }
    let asymmetry = s.asymmetry();
    if asymmetry > SYMMETRY_TOL * s.frobenius_norm() {
        return Err(Error::NotSymmetric { asymmetry });
    }
    let n = s.rows();
    let eig = s.symmetrized().into_na().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let mut vectors = DMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        values.push(eig.eigenvalues[src]);
        let mut col = eig.eigenvectors.column(src).into_owned();
        let lead = col.iamax();
        if col[lead] < 0.0 {
            col.neg_mut();
        }
        vectors.set_column(dst, &col);
    }
    Ok(SymEig { values, vectors: DenseMatrix::wrap(vectors) })
}

/// `S^{-1/2}` for symmetric positive definite `S`.
///
/// Fails with `NearSingular` when the smallest eigenvalue is not above
/// `floor` times the largest.
pub fn inv_sqrt_spd(s: &DenseMatrix, floor: f64) -> Result<DenseMatrix> {
    let SymEig { values, vectors } = sym_eig(s)?;
    let max_eig = values[0];
    let min_eig = *values.last().unwrap();
    if !(max_eig > 0.0) || min_eig <= floor * max_eig {
        return Err(Error::NearSingular { min_eig, max_eig, floor });
    }
    let v = vectors.as_na();
    let mut scaled = v.clone();
    for (j, &lambda) in values.iter().enumerate() {
        scaled.column_mut(j).scale_mut(1.0 / lambda.sqrt());
    }
    let r = scaled * v.transpose();
    Ok(DenseMatrix::wrap(r).symmetrized())
}

/// Largest singular value, from the top eigenvalue of `M'M`.
pub fn spectral_norm(m: &DenseMatrix) -> f64 {
    let g = m.tr_mul(m).symmetrized();
    let top = sym_eig(&g).map(|e| e.values[0]).unwrap_or(0.0);
    top.max(0.0).sqrt()
}

/// Orthonormal basis of the orthogonal complement of `span(U)`.
///
/// Taken from the unit eigenspace of `I - UU'`, whose spectrum is exactly
/// `{0, 1}`.
pub fn orthonormal_complement(u: &StiefelFrame) -> Result<StiefelFrame> {
    let (n, r) = (u.n(), u.r());
    if r >= n {
        return Err(Error::Shape(format!("no complement of a {n}x{r} frame")));
    }
    let p = &DenseMatrix::identity(n) - &u.projector_matrix();
    let eig = sym_eig(&p.symmetrized())?;
    Ok(StiefelFrame::new_unchecked(eig.vectors.columns(0, n - r)))
}

/// Singular values in descending order.
pub fn singular_values(m: &DenseMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.as_na().clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Smallest singular value of a complex matrix.
pub(crate) fn complex_sigma_min(m: &DMatrix<Complex<f64>>) -> f64 {
    m.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Numerical rank with tolerance `tol * sigma_max`.
pub fn numerical_rank(m: &DenseMatrix, tol: f64) -> usize {
    let s = singular_values(m);
    let cutoff = tol * s.first().copied().unwrap_or(0.0);
    s.iter().filter(|&&v| v > cutoff && v > 0.0).count()
}
