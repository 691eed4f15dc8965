//! Subspace distances and diagnostics.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::step::check_shapes;
use crate::error::{Error, Result};
use crate::linalg::factor::complex_sigma_min;
use crate::linalg::{general_eig, spectral_norm, DenseMatrix, StiefelFrame};

/// Threshold on the smallest singular value of the leading coefficient
/// block used by [`domain_rank_check`].
pub const DOMAIN_RANK_TOL: f64 = 1e-10;

/// Orthogonal projector `P = P' = P^2` of integer rank.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceProjector {
    matrix: DenseMatrix,
    rank: usize,
}

impl SubspaceProjector {
    pub fn new(matrix: DenseMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotProjector(format!(
                "{}x{} is not square",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let asym = matrix.asymmetry();
        if asym > 1e-10 {
            return Err(Error::NotProjector(format!("asymmetry {asym:e}")));
        }
        let idem = (&(&matrix * &matrix) - &matrix).frobenius_norm();
        if idem > 1e-9 {
            return Err(Error::NotProjector(format!("||P^2 - P|| = {idem:e}")));
        }
        let trace = matrix.trace();
        let rank = trace.round();
        if (trace - rank).abs() > 1e-8 || rank < 0.0 {
            return Err(Error::NotProjector(format!("trace {trace} is not an integer")));
        }
        Ok(SubspaceProjector { matrix, rank: rank as usize })
    }

    pub fn from_frame(u: &StiefelFrame) -> Self {
        SubspaceProjector { matrix: u.projector_matrix(), rank: u.r() }
    }

    /// Projector onto the span of the `m` dominant eigenvectors of `a`,
    /// from the reference eigensolver.
    ///
    /// Fails with `NoGap` if `|lambda_m| = |lambda_{m+1}|` (including a
    /// complex pair cut in half).
    pub fn dominant(a: &DenseMatrix, m: usize) -> Result<Self> {
        let spec = general_eig(a)?;
        if m < spec.dim() && !spec.has_gap_at(m) {
            return Err(Error::NoGap { index: m });
        }
        let p = spec.dominant_projector(m).ok_or(Error::NoGap { index: m })?;
        Self::new(p)
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }
}

/// `||UU' - P||_2`.
pub fn subspace_distance(u: &StiefelFrame, p: &SubspaceProjector) -> f64 {
    assert_eq!(u.n(), p.n(), "subspace_distance dimension mismatch");
    spectral_norm(&(&u.projector_matrix() - p.matrix()))
}

/// `||UU' - P UU' P||_2`; zero iff `span(U)` lies in `range(P)`.
pub fn partial_overlap_distance(u: &StiefelFrame, p: &SubspaceProjector) -> f64 {
    assert_eq!(u.n(), p.n(), "partial_overlap_distance dimension mismatch");
    let uu = u.projector_matrix();
    let puup = &(p.matrix() * &uu) * p.matrix();
    spectral_norm(&(&uu - &puup))
}

/// `U'AU`.
pub fn projected_matrix(a: &DenseMatrix, u: &StiefelFrame) -> Result<DenseMatrix> {
    check_shapes(a, u)?;
    Ok(u.matrix().tr_mul(&(a * u.matrix())))
}

/// `||(I - UU')AU||_2`, zero exactly when `span(U)` is `A`-invariant.
pub fn oja_residual(a: &DenseMatrix, u: &StiefelFrame) -> Result<f64> {
    let au = {
        check_shapes(a, u)?;
        a * u.matrix()
    };
    let inside = u.matrix() * &u.matrix().tr_mul(&au);
    Ok(spectral_norm(&(&au - &inside)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainCheck {
    pub in_domain: bool,
    /// Smallest singular value of the leading `m x r` block of `Psi^{-1} U`.
    pub sigma_min: f64,
}

/// Tests whether the leading `m x r` block of the eigen-coordinates
/// `Psi[A]^{-1} U` has full column rank.
pub fn domain_rank_check(a: &DenseMatrix, u: &StiefelFrame, m: usize) -> Result<DomainCheck> {
    check_shapes(a, u)?;
    let (n, r) = (u.n(), u.r());
    if m == 0 || m > n {
        return Err(Error::Shape(format!("m = {m} out of range for n = {n}")));
    }
    let spec = general_eig(a)?;
    let psi = spec.eigenvector_matrix().clone();
    let uc: DMatrix<Complex64> = u.matrix().as_na().map(|v| Complex64::new(v, 0.0));
    let coords = psi.lu().solve(&uc).ok_or(Error::DefectiveEigenbasis)?;
    if coords.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::DefectiveEigenbasis);
    }
    if m < r {
        return Ok(DomainCheck { in_domain: false, sigma_min: 0.0 });
    }
    let top = coords.rows(0, m).into_owned();
    let sigma_min = complex_sigma_min(&top);
    Ok(DomainCheck { in_domain: sigma_min > DOMAIN_RANK_TOL, sigma_min })
}

/// Geometric decay ratio fitted by least squares to `log(values[k])` over
/// the samples with `lo <= values[k] <= hi`.
///
/// Returns `None` with fewer than two samples in the window.
pub fn fitted_decay_ratio(values: &[f64], lo: f64, hi: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v >= lo && v <= hi && v > 0.0)
        .map(|(k, &v)| (k as f64, v.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some((sxy / sxx).exp())
}
