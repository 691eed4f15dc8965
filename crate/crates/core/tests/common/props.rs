//! Property checks shared by the proptest suite and the acceptance run.
//! Each returns `Err` with a description of the violated bound.

use natpow::linalg::rng::{gaussian_matrix, random_stiefel_from, seeded};
use natpow::linalg::{
    general_eig, random_conditioned, random_orthogonal, spectral_norm, sym_eig, DenseMatrix,
    StiefelFrame, DEFAULT_FLOOR,
};
use natpow::ltv::plant::dominant_right_projector;
use natpow::ltv::{a_alpha, a_alpha_eigenvectors};
use natpow::npm::{npm_stationary_step, npm_step, subspace_distance, SubspaceProjector};
use natpow::Error;

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

/// Nonsymmetric `A` with condition number at most 16 and a random frame.
pub fn pair(n: usize, r: usize, seed: u64) -> (DenseMatrix, StiefelFrame) {
    let mut rng = seeded(seed);
    let a = random_conditioned(&mut rng, n, 0.25, 4.0);
    let u = random_stiefel_from(&mut rng, n, r);
    (a, u)
}

fn frob(x: &DenseMatrix, y: &DenseMatrix) -> f64 {
    (x - y).frobenius_norm()
}

fn step(a: &DenseMatrix, u: &StiefelFrame) -> Result<StiefelFrame, String> {
    npm_step(a, u, DEFAULT_FLOOR).map_err(|e| e.to_string())
}

pub fn stiefel_preservation(n: usize, r: usize, seed: u64) -> Check {
    let (a, u) = pair(n, r, seed);
    let plain = step(&a, &u)?;
    ensure!(plain.defect() <= 1e-10, "plain defect {:e}", plain.defect());
    match npm_stationary_step(&a, &u, DEFAULT_FLOOR) {
        Ok(s) => ensure!(s.defect() <= 1e-10, "stationary defect {:e}", s.defect()),
        Err(Error::NearSingular { .. }) => {}
        Err(e) => return Err(e.to_string()),
    }
    Ok(())
}

pub fn scale_law(n: usize, r: usize, seed: u64, c: f64) -> Check {
    let (a, u) = pair(n, r, seed);
    let base = step(&a, &u)?;
    let scaled = step(&a.scale(c), &u)?;
    let d = frob(base.matrix(), scaled.matrix());
    ensure!(d <= 1e-12, "plain iterate moved by {d:e} under scaling by {c}");
    if let Ok(base) = npm_stationary_step(&a, &u, DEFAULT_FLOOR) {
        let scaled = npm_stationary_step(&a.scale(c), &u, DEFAULT_FLOOR).map_err(|e| e.to_string())?;
        let d = frob(base.matrix(), scaled.matrix());
        ensure!(d <= 1e-10, "stationary iterate moved by {d:e} under scaling by {c}");
    }
    // a negative factor flips the frame and keeps the projector
    let flipped = step(&a.scale(-c), &u)?;
    let d = frob(base.matrix(), &flipped.matrix().scale(-1.0));
    ensure!(d <= 1e-12, "negative scaling is not a sign flip: {d:e}");
    Ok(())
}

pub fn similarity_equivariance(n: usize, r: usize, seed: u64) -> Check {
    let (a, u) = pair(n, r, seed);
    let q = random_orthogonal(&mut seeded(seed ^ 0x5151), n);
    let a_q = &(&q * &a) * &q.transpose();
    let u_q = StiefelFrame::new(&q * u.matrix()).map_err(|e| e.to_string())?;
    let lhs = step(&a_q, &u_q)?;
    let rhs = &q * step(&a, &u)?.matrix();
    let d = frob(lhs.matrix(), &rhs);
    ensure!(d <= 1e-10, "orthogonal similarity: frames differ by {d:e}");

    let s = random_conditioned(&mut seeded(seed ^ 0xa5a5), n, 0.5, 2.0);
    let a_s = &(&s * &a) * &s.inverse().ok_or("singular S")?;
    let u_s = StiefelFrame::orthonormalize(&(&s * u.matrix())).map_err(|e| e.to_string())?;
    let lhs = step(&a_s, &u_s)?;
    let rhs = StiefelFrame::orthonormalize(&(&s * step(&a, &u)?.matrix())).map_err(|e| e.to_string())?;
    let d = subspace_distance(&lhs, &SubspaceProjector::from_frame(&rhs));
    ensure!(d <= 1e-9, "general similarity: subspaces differ by {d:e}");
    Ok(())
}

pub fn variant_projectors(n: usize, r: usize, seed: u64) -> Check {
    let (a, u) = pair(n, r, seed);
    let plain = step(&a, &u)?;
    if let Ok(stat) = npm_stationary_step(&a, &u, DEFAULT_FLOOR) {
        let d = spectral_norm(&(&plain.projector_matrix() - &stat.projector_matrix()));
        ensure!(d <= 1e-12, "projector gap {d:e}");
    }
    Ok(())
}

pub fn general_vs_sym_eig(n: usize, seed: u64) -> Check {
    let g = gaussian_matrix(&mut seeded(seed), n, n);
    let s = (&g + &g.transpose()).scale(0.5);
    let sym = sym_eig(&s).map_err(|e| e.to_string())?;
    let spec = general_eig(&s).map_err(|e| e.to_string())?;
    let scale = s.frobenius_norm().max(1.0);
    ensure!(
        spec.eigenvalues().iter().all(|z| z.im.abs() <= 1e-10 * scale),
        "complex eigenvalue of a symmetric matrix: {:?}",
        spec.eigenvalues()
    );
    let mut got: Vec<f64> = spec.eigenvalues().iter().map(|z| z.re).collect();
    got.sort_by(|x, y| y.total_cmp(x));
    for (x, y) in got.iter().zip(&sym.values) {
        ensure!((x - y).abs() <= 1e-10 * scale, "{got:?} vs {:?}", sym.values);
    }
    ensure!(spec.residual(&s) <= 1e-10 * scale, "residual {:e}", spec.residual(&s));
    Ok(())
}

pub fn general_eig_residual(n: usize, seed: u64) -> Check {
    let a = random_conditioned(&mut seeded(seed), n, 0.25, 4.0);
    let spec = general_eig(&a).map_err(|e| e.to_string())?;
    ensure!(spec.residual(&a) <= 1e-9, "residual {:e}", spec.residual(&a));
    let trace: f64 = spec.eigenvalues().iter().map(|z| z.re).sum();
    ensure!((trace - a.trace()).abs() <= 1e-9, "trace {trace} vs {}", a.trace());
    Ok(())
}

pub fn psi_formulas(alpha: f64) -> Check {
    let a = a_alpha(alpha);
    let psi = a_alpha_eigenvectors(alpha);
    for (i, (p, l)) in psi.iter().zip([1.0, -1.0, alpha]).enumerate() {
        let v = DenseMatrix::column(p).unwrap();
        let res = (&(&a * &v) - &v.scale(l)).max_abs();
        ensure!(res <= 1e-12, "psi_{} residual {res:e} at alpha {alpha}", i + 1);
        ensure!((v.frobenius_norm() - 1.0).abs() <= 1e-14, "psi_{} not unit", i + 1);
    }
    let spec = general_eig(&a).map_err(|e| e.to_string())?;
    let oracle = spec.dominant_projector(2).ok_or("oracle projector unavailable")?;
    let d = spectral_norm(&(&oracle - &dominant_right_projector(alpha)));
    ensure!(d <= 1e-10, "dominant projector differs by {d:e} at alpha {alpha}");
    let v3 = spec.eigenvector_matrix().column(2);
    let dot: f64 = (0..3).map(|i| v3[i].re * psi[2][i]).sum();
    ensure!((dot.abs() - 1.0).abs() <= 1e-10, "psi_3 overlap {dot} at alpha {alpha}");
    Ok(())
}
