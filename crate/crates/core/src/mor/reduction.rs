//! Reduction onto dominant right/left subspaces extracted by the natural
//! power method.

use std::thread;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::gramian::{observability_gramian, reachability_gramian};
use super::system::{BasisTag, LtiSystem, ReducedRealization};
use crate::error::{Error, Result};
use crate::linalg::rng::{random_stiefel_from, seeded};
use crate::linalg::{
    general_eig, orthonormal_complement, singular_values, spectral_norm, DenseMatrix,
    StiefelFrame,
};
use crate::npm::{npm_run, subspace_distance, NpmConfig, SubspaceProjector, Variant};

/// Smallest admissible singular value of `V'U`.
pub const CROSS_GRAM_TOL: f64 = 1e-10;

/// Condition-number bound above which `A` counts as singular in
/// [`minor_left_subspace_check`].
pub const INVERSE_COND_LIMIT: f64 = 1e12;

/// Blocks of `Q'AQ` for `Q = [U_r, U_perp]`.
#[derive(Debug, Clone)]
pub struct BlockForm {
    pub a_ur: DenseMatrix,
    pub coupling: DenseMatrix,
    pub a_uperp: DenseMatrix,
    /// `||U_perp' A U_r||_2`, zero when `span(U_r)` is invariant.
    pub lower_residual: f64,
    pub uperp: StiefelFrame,
}

pub fn similarity_block_form(a: &DenseMatrix, ur: &StiefelFrame) -> Result<BlockForm> {
    if !a.is_square() || a.rows() != ur.n() {
        return Err(Error::Shape("A and U_r do not conform".into()));
    }
    let (n, r) = (ur.n(), ur.r());
    let uperp = orthonormal_complement(ur)?;
    let q = ur.matrix().hstack(uperp.matrix())?;
    let t = &q.tr_mul(a) * &q;
    let lower = t.block(r, 0, n - r, r);
    Ok(BlockForm {
        a_ur: t.block(0, 0, r, r),
        coupling: t.block(0, r, r, n - r),
        a_uperp: t.block(r, r, n - r, n - r),
        lower_residual: spectral_norm(&lower),
        uperp,
    })
}

/// Largest distance in a greedy matching of `eig(A_Ur) U eig(A_Uperp)`
/// against `eig(A)`.
pub fn spectrum_split_error(a: &DenseMatrix, blocks: &BlockForm) -> Result<f64> {
    let full = general_eig(a)?.eigenvalues().to_vec();
    let mut parts = general_eig(&blocks.a_ur)?.eigenvalues().to_vec();
    parts.extend_from_slice(general_eig(&blocks.a_uperp)?.eigenvalues());
    Ok(multiset_distance(&full, &parts))
}

pub(crate) fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for &x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, &y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("equal lengths");
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

#[derive(Debug, Clone)]
pub struct DualSubspaces {
    /// Dominant right subspace, from `A`.
    pub ur: StiefelFrame,
    /// Dominant left subspace, from `A'`.
    pub vr: StiefelFrame,
    /// `V_r' U_r`.
    pub cross_gram: DenseMatrix,
    pub cross_sigma_min: f64,
    /// `sigma_max / sigma_min` of the cross Gramian.
    pub cross_condition: f64,
    pub u_converged: bool,
    pub v_converged: bool,
}

/// Extracts the dominant right and left `r`-dimensional subspaces from
/// two seeded initial frames; the two runs execute on separate threads.
pub fn dual_subspaces(a: &DenseMatrix, r: usize, cfg: &NpmConfig, seed: u64) -> Result<DualSubspaces> {
    if !a.is_square() || r == 0 || r > a.rows() {
        return Err(Error::Shape(format!("rank {r} for a {}x{} matrix", a.rows(), a.cols())));
    }
    let n = a.rows();
    let mut rng = seeded(seed);
    let u0 = random_stiefel_from(&mut rng, n, r);
    let v0 = random_stiefel_from(&mut rng, n, r);
    let at = a.transpose();

    let (right, left) = thread::scope(|s| {
        let right = s.spawn(|| npm_run(a, &u0, cfg, Variant::Plain, None));
        let left = npm_run(&at, &v0, cfg, Variant::Plain, None);
        (right.join().expect("right-subspace run panicked"), left)
    });
    let (right, left) = (right?, left?);

    let cross_gram = left.final_frame.matrix().tr_mul(right.final_frame.matrix());
    let s = singular_values(&cross_gram);
    let cross_sigma_min = *s.last().unwrap();
    if cross_sigma_min <= CROSS_GRAM_TOL {
        return Err(Error::CrossGramSingular { sigma_min: cross_sigma_min });
    }
    Ok(DualSubspaces {
        cross_condition: s[0] / cross_sigma_min,
        ur: right.final_frame,
        vr: left.final_frame,
        cross_gram,
        cross_sigma_min,
        u_converged: right.converged,
        v_converged: left.converged,
    })
}

/// Distance between `span(U_perp)` and the dominant `(n - r)`-dimensional
/// subspace of `A^{-T}` extracted by the natural power method.
pub fn minor_left_subspace_check(
    a: &DenseMatrix,
    uperp: &StiefelFrame,
    cfg: &NpmConfig,
    seed: u64,
) -> Result<f64> {
    if !a.is_square() || a.rows() != uperp.n() {
        return Err(Error::Shape("A and U_perp do not conform".into()));
    }
    let s = singular_values(a);
    let (max_s, min_s) = (s[0], *s.last().unwrap());
    if !(min_s > 0.0) || max_s / min_s > INVERSE_COND_LIMIT {
        return Err(Error::NearSingular {
            min_eig: min_s,
            max_eig: max_s,
            floor: 1.0 / INVERSE_COND_LIMIT,
        });
    }
    let inv_t = a
        .inverse()
        .ok_or(Error::NearSingular { min_eig: 0.0, max_eig: max_s, floor: 0.0 })?
        .transpose();
    let w0 = crate::linalg::random_stiefel(a.rows(), uperp.r(), seed);
    let run = npm_run(&inv_t, &w0, cfg, Variant::Plain, None)?;
    Ok(subspace_distance(&run.final_frame, &SubspaceProjector::from_frame(uperp)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramianResiduals {
    pub observability: f64,
    pub reachability: f64,
}

/// Compares the projected full Gramians with the Gramians of the projected
/// systems, all over the horizon `n`:
/// `||U'W_o U - W_o(A_U, C_U)||` and `||V'W_r V - W_r(A_V, B_V)||`.
pub fn gramian_projection_residual(
    sys: &LtiSystem,
    ur: &StiefelFrame,
    vr: &StiefelFrame,
) -> Result<GramianResiduals> {
    let n = sys.states();
    if ur.n() != n || vr.n() != n {
        return Err(Error::Shape("frames do not match the state dimension".into()));
    }
    let (a, b, c) = (sys.a(), sys.b(), sys.c());
    let (u, v) = (ur.matrix(), vr.matrix());

    let wo = observability_gramian(a, c, n);
    let a_u = u.tr_mul(&(a * u));
    let c_u = c * u;
    let lhs = &u.tr_mul(&wo) * u;
    let obs = spectral_norm(&(&lhs - &observability_gramian(&a_u, &c_u, n)));

    let wr = reachability_gramian(a, b, n);
    let a_v = v.tr_mul(&(a * v));
    let b_v = v.tr_mul(b);
    let lhs = &v.tr_mul(&wr) * v;
    let reach = spectral_norm(&(&lhs - &reachability_gramian(&a_v, &b_v, n)));

    Ok(GramianResiduals { observability: obs, reachability: reach })
}

/// The U-side and V-side reduced realizations.
pub fn reduced_models(
    sys: &LtiSystem,
    duals: &DualSubspaces,
) -> Result<(ReducedRealization, ReducedRealization)> {
    let (u, v) = (duals.ur.matrix(), duals.vr.matrix());
    if u.rows() != sys.states() || v.rows() != sys.states() || u.cols() != v.cols() {
        return Err(Error::Shape("dual frames do not match the system".into()));
    }
    let g = v.tr_mul(u);
    let sigma_min = *singular_values(&g).last().unwrap();
    if sigma_min <= CROSS_GRAM_TOL {
        return Err(Error::CrossGramSingular { sigma_min });
    }
    let g_inv = g.inverse().ok_or(Error::CrossGramSingular { sigma_min })?;
    let (a, b, c) = (sys.a(), sys.b(), sys.c());
    let vb = v.tr_mul(b);
    let cu = c * u;

    let u_side = ReducedRealization {
        ar: u.tr_mul(&(a * u)),
        br: &g_inv * &vb,
        cr: cu.clone(),
        basis: BasisTag::USide,
    };
    let v_side = ReducedRealization {
        ar: v.tr_mul(&(a * v)),
        br: vb,
        cr: &cu * &g_inv,
        basis: BasisTag::VSide,
    };
    Ok((u_side, v_side))
}

/// `C (zI - A)^{-1} B`.
pub fn transfer_function_eval(
    ar: &DenseMatrix,
    br: &DenseMatrix,
    cr: &DenseMatrix,
    z: Complex64,
) -> Result<DMatrix<Complex64>> {
    let r = ar.rows();
    if !ar.is_square() || br.rows() != r || cr.cols() != r {
        return Err(Error::Shape("realization does not conform".into()));
    }
    let cplx = |m: &DenseMatrix| m.as_na().map(|v| Complex64::new(v, 0.0));
    let resolvent = DMatrix::<Complex64>::identity(r, r) * z - cplx(ar);
    let scale = resolvent.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let lu = resolvent.lu();
    let det = lu.determinant();
    if det.norm() <= 1e-12 * scale.powi(r as i32) {
        return Err(Error::ResolventSingular { re: z.re, im: z.im });
    }
    let x = lu
        .solve(&cplx(br))
        .ok_or(Error::ResolventSingular { re: z.re, im: z.im })?;
    Ok(cplx(cr) * x)
}

/// `count` equispaced points on `|z| = radius`, starting at `z = radius`.
pub fn circle_points(radius: f64, count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|i| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * i as f64 / count as f64))
        .collect()
}

/// Largest entrywise difference of the two transfer functions over `points`.
pub fn transfer_mismatch(
    lhs: &ReducedRealization,
    rhs: &ReducedRealization,
    points: &[Complex64],
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &z in points {
        let p = transfer_function_eval(&lhs.ar, &lhs.br, &lhs.cr, z)?;
        let q = transfer_function_eval(&rhs.ar, &rhs.br, &rhs.cr, z)?;
        for (x, y) in p.iter().zip(q.iter()) {
            worst = worst.max((x - y).norm());
        }
    }
    Ok(worst)
}
