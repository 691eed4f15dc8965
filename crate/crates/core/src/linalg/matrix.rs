//! Dense real matrices and orthonormal frames.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Tolerance on `||U'U - I||_F` accepted by [`StiefelFrame::new`].
pub const STIEFEL_TOL: f64 = 1e-10;

/// Real `rows x cols` matrix with finite entries.
///
/// Constructors reject empty shapes and NaN/Inf entries. Results of
/// arithmetic between valid matrices are not re-validated.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix(DMatrix<f64>);

impl DenseMatrix {
    /// Builds a matrix from entries in row-major order.
    pub fn new(rows: usize, cols: usize, row_major: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("empty shape {rows}x{cols}")));
        }
        if row_major.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                row_major.len()
            )));
        }
        Self::from_na(DMatrix::from_row_slice(rows, cols, &row_major))
    }

    /// Builds a matrix from a slice of equal-length rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != ncols {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries, expected {ncols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Self::new(nrows, ncols, data)
    }

    /// Wraps an nalgebra matrix, validating shape and finiteness.
    pub fn from_na(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() == 0 || m.ncols() == 0 {
            return Err(Error::Shape(format!("empty shape {}x{}", m.nrows(), m.ncols())));
        }
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                if !m[(i, j)].is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(DenseMatrix(m))
    }

    pub(crate) fn wrap(m: DMatrix<f64>) -> Self {
        debug_assert!(m.nrows() > 0 && m.ncols() > 0);
        DenseMatrix(m)
    }

    pub fn identity(n: usize) -> Self {
        Self::wrap(DMatrix::identity(n, n))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::wrap(DMatrix::zeros(rows, cols))
    }

    pub fn from_diagonal(d: &[f64]) -> Result<Self> {
        let n = d.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        Self::from_na(m)
    }

    /// Column vector from a slice.
    pub fn column(v: &[f64]) -> Result<Self> {
        Self::new(v.len(), 1, v.to_vec())
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn is_square(&self) -> bool {
        self.0.is_square()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn as_na(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_na(self) -> DMatrix<f64> {
        self.0
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self::wrap(self.0.transpose())
    }

    /// `self' * rhs` without forming the transpose.
    pub fn tr_mul(&self, rhs: &DenseMatrix) -> Self {
        Self::wrap(self.0.tr_mul(&rhs.0))
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::wrap(&self.0 * c)
    }

    /// Columns `start..start + count` as a new matrix.
    pub fn columns(&self, start: usize, count: usize) -> Self {
        Self::wrap(self.0.columns(start, count).into_owned())
    }

    /// Block `rows x cols` starting at `(i, j)`.
    pub fn block(&self, i: usize, j: usize, rows: usize, cols: usize) -> Self {
        Self::wrap(self.0.view((i, j), (rows, cols)).into_owned())
    }

    /// Horizontal concatenation `[self, rhs]`.
    pub fn hstack(&self, rhs: &DenseMatrix) -> Result<Self> {
        if self.rows() != rhs.rows() {
            return Err(Error::Shape(format!(
                "hstack of {}x{} and {}x{}",
                self.rows(),
                self.cols(),
                rhs.rows(),
                rhs.cols()
            )));
        }
        let mut m = DMatrix::zeros(self.rows(), self.cols() + rhs.cols());
        m.columns_mut(0, self.cols()).copy_from(&self.0);
        m.columns_mut(self.cols(), rhs.cols()).copy_from(&rhs.0);
        Ok(Self::wrap(m))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.amax()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    /// `(M + M') / 2`.
    pub fn symmetrized(&self) -> Self {
        Self::wrap((&self.0 + self.0.transpose()) * 0.5)
    }

    pub fn asymmetry(&self) -> f64 {
        (&self.0 - self.0.transpose()).norm()
    }

    /// Solves `self * X = rhs` via LU; `None` when singular.
    pub fn solve(&self, rhs: &DenseMatrix) -> Option<DenseMatrix> {
        self.0.clone().lu().solve(&rhs.0).map(Self::wrap)
    }

    pub fn inverse(&self) -> Option<DenseMatrix> {
        self.0.clone().try_inverse().map(Self::wrap)
    }

    pub fn matrix_power(&self, k: usize) -> DenseMatrix {
        let mut out = DMatrix::identity(self.rows(), self.cols());
        for _ in 0..k {
            out = &out * &self.0;
        }
        Self::wrap(out)
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DenseMatrix {}x{} [", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:.6e}", self.0[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;
    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        DenseMatrix::wrap(&self.0 * &rhs.0)
    }
}

impl Add for &DenseMatrix {
    type Output = DenseMatrix;
    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        DenseMatrix::wrap(&self.0 + &rhs.0)
    }
}

impl Sub for &DenseMatrix {
    type Output = DenseMatrix;
    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        DenseMatrix::wrap(&self.0 - &rhs.0)
    }
}

impl Neg for &DenseMatrix {
    type Output = DenseMatrix;
    fn neg(self) -> DenseMatrix {
        DenseMatrix::wrap(-&self.0)
    }
}

/// An `n x r` matrix with orthonormal columns, `n >= r`.
#[derive(Clone, PartialEq)]
pub struct StiefelFrame(DenseMatrix);

impl StiefelFrame {
    /// Accepts `m` if `||m'm - I||_F <= STIEFEL_TOL`.
    pub fn new(m: DenseMatrix) -> Result<Self> {
        if m.rows() < m.cols() {
            return Err(Error::Shape(format!(
                "frame must be tall, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let defect = orthonormality_defect(&m);
        if defect > STIEFEL_TOL {
            return Err(Error::NotOrthonormal { defect });
        }
        Ok(StiefelFrame(m))
    }

    pub(crate) fn new_unchecked(m: DenseMatrix) -> Self {
        StiefelFrame(m)
    }

    /// Orthonormalizes the columns of `m` with a thin QR factorization.
    pub fn orthonormalize(m: &DenseMatrix) -> Result<Self> {
        super::factor::qr_thin(m).map(|(q, _)| q)
    }

    /// Polar orthonormalization `X (X'X)^{-1/2}`.
    pub fn polar(x: &DenseMatrix) -> Result<Self> {
        if x.rows() < x.cols() {
            return Err(Error::Shape(format!("polar of wide {}x{}", x.rows(), x.cols())));
        }
        let g = x.tr_mul(x).symmetrized();
        let r = super::factor::inv_sqrt_spd(&g, super::factor::DEFAULT_FLOOR)?;
        Ok(StiefelFrame(x * &r))
    }

    /// First `r` columns of `I_n`.
    pub fn canonical(n: usize, r: usize) -> Self {
        assert!(n >= r && r >= 1, "canonical frame needs n >= r >= 1");
        StiefelFrame(DenseMatrix::identity(n).columns(0, r))
    }

    pub fn n(&self) -> usize {
        self.0.rows()
    }

    pub fn r(&self) -> usize {
        self.0.cols()
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.0
    }

    /// `||U'U - I||_F`.
    pub fn defect(&self) -> f64 {
        orthonormality_defect(&self.0)
    }

    /// `U U'`.
    pub fn projector_matrix(&self) -> DenseMatrix {
        DenseMatrix::wrap(self.0.as_na() * self.0.as_na().transpose())
    }
}

impl fmt::Debug for StiefelFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StiefelFrame({:?})", self.0)
    }
}

fn orthonormality_defect(m: &DenseMatrix) -> f64 {
    let g = m.tr_mul(m);
    (g.as_na() - DMatrix::<f64>::identity(m.cols(), m.cols())).norm()
}
