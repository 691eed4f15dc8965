//! Single-input / single-output pole assignment by Ackermann's formula.

use crate::error::{Error, Result};
use crate::linalg::{singular_values, DenseMatrix};

/// Krylov matrices with smallest singular value at or below this are
/// treated as singular.
pub const KRYLOV_TOL: f64 = 1e-10;

/// Monic characteristic polynomial coefficients `[c_{n-1}, ..., c_0]` of
/// `prod (z - t_i)`.
pub fn poly_from_roots(roots: &[f64]) -> Vec<f64> {
    let mut c = vec![1.0];
    for &t in roots {
        let mut next = vec![0.0; c.len() + 1];
        for (i, &ci) in c.iter().enumerate() {
            next[i] += ci;
            next[i + 1] -= t * ci;
        }
        c = next;
    }
    c.remove(0);
    c
}

/// Characteristic polynomial `det(zI - M)` of a 2x2 matrix as
/// `[-trace, det]`.
pub fn charpoly_2x2(m: &DenseMatrix) -> [f64; 2] {
    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    [-(a + d), a * d - b * c]
}

/// Feedback row `F` such that `A - B F` has eigenvalues `targets`.
pub fn place_poles_si(a: &DenseMatrix, b: &DenseMatrix, targets: &[f64]) -> Result<DenseMatrix> {
    let n = a.rows();
    if !a.is_square() || b.shape() != (n, 1) || targets.len() != n {
        return Err(Error::Shape(format!(
            "placement needs A n x n, B n x 1 and n targets; got A {:?}, B {:?}, {} targets",
            a.shape(),
            b.shape(),
            targets.len()
        )));
    }
    let mut krylov = b.clone();
    let mut col = b.clone();
    for _ in 1..n {
        col = a * &col;
        krylov = krylov.hstack(&col)?;
    }
    let sigma_min = *singular_values(&krylov).last().unwrap();
    if sigma_min <= KRYLOV_TOL {
        return Err(Error::Uncontrollable { sigma_min });
    }

    // p(A) = A^n + c_{n-1} A^{n-1} + ... + c_0 I, by Horner
    let coeffs = poly_from_roots(targets);
    let mut p_a = a.clone();
    for (i, &c) in coeffs.iter().enumerate() {
        p_a = &p_a + &DenseMatrix::identity(n).scale(c);
        if i + 1 < coeffs.len() {
            p_a = &p_a * a;
        }
    }

    // F = e_n' K^{-1} p(A)
    let mut last = DenseMatrix::zeros(1, n).into_na();
    last[(0, n - 1)] = 1.0;
    let rhs = DenseMatrix::from_na(last).unwrap();
    let row = krylov
        .transpose()
        .solve(&rhs.transpose())
        .ok_or(Error::Uncontrollable { sigma_min })?
        .transpose();
    Ok(&row * &p_a)
}

/// Observer gain column `L` such that `A - L C` has eigenvalues `targets`.
pub fn place_observer_si(a: &DenseMatrix, c: &DenseMatrix, targets: &[f64]) -> Result<DenseMatrix> {
    match place_poles_si(&a.transpose(), &c.transpose(), targets) {
        Ok(f) => Ok(f.transpose()),
        Err(Error::Uncontrollable { sigma_min }) => Err(Error::Unobservable { sigma_min }),
        Err(e) => Err(e),
    }
}
