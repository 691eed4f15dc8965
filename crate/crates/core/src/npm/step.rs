use crate::error::{Error, Result};
use crate::linalg::{inv_sqrt_spd, DenseMatrix, StiefelFrame};

pub(crate) fn check_shapes(a: &DenseMatrix, u: &StiefelFrame) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Shape(format!("A must be square, got {}x{}", a.rows(), a.cols())));
    }
    if a.rows() != u.n() {
        return Err(Error::Shape(format!(
            "A is {}x{} but U has {} rows",
            a.rows(),
            a.cols(),
            u.n()
        )));
    }
    Ok(())
}

/// One natural power step `A U (U'A'AU)^{-1/2}`.
///
/// The result is the polar factor of `AU`: it spans the same subspace as
/// `AU` and has orthonormal columns.
pub fn npm_step(a: &DenseMatrix, u: &StiefelFrame, z_floor: f64) -> Result<StiefelFrame> {
    check_shapes(a, u)?;
    let au = a * u.matrix();
    let z = au.tr_mul(&au).symmetrized();
    let z_inv_sqrt = inv_sqrt_spd(&z, z_floor)?;
    Ok(StiefelFrame::new_unchecked(&au * &z_inv_sqrt))
}

/// Natural power step followed by the orthogonal correction
/// `W = (M'M)^{-1/2} M'` with `M = U'AU`.
///
/// `W` does not change the projector of the step, but frames whose span
/// is an invariant subspace become fixed points: there the update reduces
/// to `A U M^{-1} = U`.
///
/// `W` is evaluated as `Y X'` from the SVD `M = X S Y'`, which equals the
/// formula above and stays orthogonal to rounding even when `M` is poorly
/// conditioned. `M'M` is held to the same floor as `Z`.
pub fn npm_stationary_step(
    a: &DenseMatrix,
    u: &StiefelFrame,
    z_floor: f64,
) -> Result<StiefelFrame> {
    check_shapes(a, u)?;
    let m = u.matrix().tr_mul(&(a * u.matrix()));
    let svd = m.as_na().clone().svd(true, true);
    let (s_max, s_min) = svd
        .singular_values
        .iter()
        .fold((0.0f64, f64::INFINITY), |(hi, lo), &s| (hi.max(s), lo.min(s)));
    let (max_eig, min_eig) = (s_max * s_max, s_min * s_min);
    if !(max_eig > 0.0) || min_eig <= z_floor * max_eig {
        return Err(Error::NearSingular { min_eig, max_eig, floor: z_floor });
    }
    let (x, yt) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
    let w = DenseMatrix::from_na(yt.transpose() * x.transpose())?;
    let plain = npm_step(a, u, z_floor)?;
    Ok(StiefelFrame::new_unchecked(plain.matrix() * &w))
}
