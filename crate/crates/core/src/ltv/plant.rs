//! The 3x3 benchmark matrix, its eigenvectors and the rotating plant.

use crate::linalg::{DenseMatrix, StiefelFrame};

/// Upper-triangular benchmark with eigenvalues `1, alpha, -1`:
///
/// ```text
/// [ 1  1      2 ]
/// [ 0  alpha  1 ]
/// [ 0  0     -1 ]
/// ```
pub fn a_alpha(alpha: f64) -> DenseMatrix {
    DenseMatrix::from_rows(&[[1.0, 1.0, 2.0], [0.0, alpha, 1.0], [0.0, 0.0, -1.0]])
        .expect("finite alpha")
}

/// Closed-form unit eigenvectors of [`a_alpha`], for eigenvalues
/// `1`, `-1` and `alpha` in that order.
pub fn a_alpha_eigenvectors(alpha: f64) -> [[f64; 3]; 3] {
    let n2 = (8.0 * alpha * alpha + 12.0 * alpha + 9.0).sqrt();
    let n3 = (2.0 - 2.0 * alpha + alpha * alpha).sqrt();
    [
        [1.0, 0.0, 0.0],
        [(1.0 + 2.0 * alpha) / n2, 2.0 / n2, -2.0 * (1.0 + alpha) / n2],
        [1.0 / n3, (alpha - 1.0) / n3, 0.0],
    ]
}

/// Projector onto `span(psi_1, psi_2)`, the dominant right subspace.
pub fn dominant_right_projector(alpha: f64) -> DenseMatrix {
    let [p1, p2, _] = a_alpha_eigenvectors(alpha);
    let x = DenseMatrix::from_rows(&[[p1[0], p2[0]], [p1[1], p2[1]], [p1[2], p2[2]]]).unwrap();
    StiefelFrame::orthonormalize(&x).expect("psi_1, psi_2 independent").projector_matrix()
}

/// Projector onto the dominant left subspace, `I - psi_3 psi_3'`.
///
/// Left eigenvectors for `1` and `-1` are orthogonal to the right
/// eigenvector `psi_3`.
pub fn dominant_left_projector(alpha: f64) -> DenseMatrix {
    let [_, _, p3] = a_alpha_eigenvectors(alpha);
    let v = DenseMatrix::column(&p3).unwrap();
    &DenseMatrix::identity(3) - &(&v * &v.transpose())
}

/// `Q[k] = Q1[k] Q2[k]`, Givens rotations by `omega1 k` in the (1,2) plane
/// and by `omega2 k` in the (2,3) plane.
pub fn rotation_q(k: usize, omega1: f64, omega2: f64) -> DenseMatrix {
    let (s1, c1) = (omega1 * k as f64).sin_cos();
    let (s2, c2) = (omega2 * k as f64).sin_cos();
    let q1 = DenseMatrix::from_rows(&[[c1, -s1, 0.0], [s1, c1, 0.0], [0.0, 0.0, 1.0]]).unwrap();
    let q2 = DenseMatrix::from_rows(&[[1.0, 0.0, 0.0], [0.0, c2, -s2], [0.0, s2, c2]]).unwrap();
    &q1 * &q2
}

/// `Q[k]' A_alpha Q[k]`.
pub fn rotated_plant(alpha: f64, k: usize, omega1: f64, omega2: f64) -> DenseMatrix {
    let q = rotation_q(k, omega1, omega2);
    &(&q.transpose() * &a_alpha(alpha)) * &q
}

/// Input matrix `B = e3`.
pub fn input_matrix() -> DenseMatrix {
    DenseMatrix::column(&[0.0, 0.0, 1.0]).unwrap()
}

/// Output matrix `C = e1'`.
pub fn output_matrix() -> DenseMatrix {
    DenseMatrix::from_rows(&[[1.0, 0.0, 0.0]]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::general_eig;

    #[test]
    fn diagonal_reads_one_alpha_minus_one() {
        for alpha in [0.0, 0.2, 0.5, 0.9, -0.3] {
            let a = a_alpha(alpha);
            assert_eq!([a.get(0, 0), a.get(1, 1), a.get(2, 2)], [1.0, alpha, -1.0]);
            assert_eq!([a.get(1, 0), a.get(2, 0), a.get(2, 1)], [0.0; 3]);
        }
    }

    #[test]
    fn modulus_gaps() {
        let gap = |alpha: f64| {
            let m = general_eig(&a_alpha(alpha)).unwrap().moduli();
            m[1] - m[2]
        };
        assert!((gap(0.0) - 1.0).abs() < 1e-12);
        assert!((gap(0.9) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn eigenvector_formulas() {
        for alpha in [0.0, 0.2, 0.5, 0.9] {
            let a = a_alpha(alpha);
            let lambdas = [1.0, -1.0, alpha];
            for (psi, lambda) in a_alpha_eigenvectors(alpha).iter().zip(lambdas) {
                let v = DenseMatrix::column(psi).unwrap();
                let r = &(&a * &v) - &v.scale(lambda);
                assert!(r.max_abs() < 1e-12, "alpha {alpha} lambda {lambda}");
                assert!((v.frobenius_norm() - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(rotation_q(0, 0.01, 0.03), DenseMatrix::identity(3));
        let q = rotation_q(1, std::f64::consts::FRAC_PI_2, 0.0);
        let expect = DenseMatrix::from_rows(&[[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]).unwrap();
        assert!((&q - &expect).max_abs() < 1e-15);
        let q = rotation_q(1000, 0.01, 0.03);
        assert!((&q.tr_mul(&q) - &DenseMatrix::identity(3)).max_abs() < 1e-12);
    }

    #[test]
    fn plant_is_similar_to_a_alpha() {
        assert_eq!(rotated_plant(0.5, 0, 0.01, 0.03), a_alpha(0.5));
        for k in [1, 37, 250] {
            let ev = general_eig(&rotated_plant(0.5, k, 0.01, 0.03)).unwrap();
            let re: Vec<f64> = ev.eigenvalues().iter().map(|z| z.re).collect();
            for (got, want) in re.iter().zip([1.0, -1.0, 0.5]) {
                assert!((got - want).abs() < 1e-9);
            }
        }
        let step = &rotated_plant(0.5, 11, 0.01, 0.03) - &rotated_plant(0.5, 10, 0.01, 0.03);
        assert!(crate::linalg::spectral_norm(&step) < 0.2);
    }

    #[test]
    fn oracle_projectors_match_eigensolver() {
        for alpha in [0.0, 0.2, 0.5, 0.9] {
            let a = a_alpha(alpha);
            let right = general_eig(&a).unwrap().dominant_projector(2).unwrap();
            assert!((&right - &dominant_right_projector(alpha)).max_abs() < 1e-10);
            let left = general_eig(&a.transpose()).unwrap().dominant_projector(2).unwrap();
            assert!((&left - &dominant_left_projector(alpha)).max_abs() < 1e-10);
        }
    }
}
