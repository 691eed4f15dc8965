//! Iteration drivers.

use super::metrics::{subspace_distance, SubspaceProjector};
use super::step::{check_shapes, npm_stationary_step, npm_step};
use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, StiefelFrame, DEFAULT_FLOOR};

/// Stopping rule and numerical floor for [`npm_run`].
///
/// A run stops once `||U[k+1]U[k+1]' - U[k]U[k]'||_F <= projector_tol` or
/// after `max_iter` steps. Frames need not converge; projectors do.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NpmConfig {
    pub max_iter: usize,
    pub projector_tol: f64,
    pub z_floor: f64,
}

impl Default for NpmConfig {
    fn default() -> Self {
        NpmConfig { max_iter: 10_000, projector_tol: 1e-12, z_floor: DEFAULT_FLOOR }
    }
}

impl NpmConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iter == 0 {
            return Err(Error::Config("max_iter must be at least 1".into()));
        }
        if !(self.projector_tol > 0.0) {
            return Err(Error::Config("projector_tol must be positive".into()));
        }
        if !(self.z_floor > 0.0) {
            return Err(Error::Config("z_floor must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    #[default]
    Plain,
    /// Adds the orthogonal factor that makes invariant frames stationary.
    Stationary,
}

impl Variant {
    pub fn step(self, a: &DenseMatrix, u: &StiefelFrame, z_floor: f64) -> Result<StiefelFrame> {
        match self {
            Variant::Plain => npm_step(a, u, z_floor),
            Variant::Stationary => npm_stationary_step(a, u, z_floor),
        }
    }
}

#[derive(Debug, Clone)]
pub struct NpmRunReport {
    pub final_frame: StiefelFrame,
    pub iterations: usize,
    pub converged: bool,
    /// Frobenius norm of the projector change at each step.
    pub projector_delta_history: Vec<f64>,
    /// Spectral distance to the reference projector after each step.
    pub distance_history: Option<Vec<f64>>,
}

/// Iterates `variant` from `u0` until the projector stagnates or
/// `cfg.max_iter` steps have been taken.
///
/// A singular step surfaces as `Error::AtStep` carrying the one-based
/// index of the step that failed.
pub fn npm_run(
    a: &DenseMatrix,
    u0: &StiefelFrame,
    cfg: &NpmConfig,
    variant: Variant,
    reference: Option<&SubspaceProjector>,
) -> Result<NpmRunReport> {
    cfg.validate()?;
    check_shapes(a, u0)?;
    if let Some(p) = reference {
        if p.n() != u0.n() {
            return Err(Error::Shape("reference projector dimension mismatch".into()));
        }
    }
    let mut u = u0.clone();
    let mut proj = u.projector_matrix();
    let mut deltas = Vec::new();
    let mut distances = reference.map(|_| Vec::new());
    let mut converged = false;

    for k in 1..=cfg.max_iter {
        let next = variant.step(a, &u, cfg.z_floor).map_err(|e| e.at_step(k))?;
        let next_proj = next.projector_matrix();
        let delta = (&next_proj - &proj).frobenius_norm();
        deltas.push(delta);
        if let (Some(d), Some(p)) = (distances.as_mut(), reference) {
            d.push(subspace_distance(&next, p));
        }
        u = next;
        proj = next_proj;
        if delta <= cfg.projector_tol {
            converged = true;
            break;
        }
    }

    Ok(NpmRunReport {
        final_frame: u,
        iterations: deltas.len(),
        converged,
        projector_delta_history: deltas,
        distance_history: distances,
    })
}

/// Dimension reduction: runs the plain iteration on the `r x r` projection
/// `A_proj = U_r'AU_r` from an `r x m` frame, `m < r`.
///
/// Composing `U_r` with the limit frame gives an `m`-dimensional dominant
/// subspace of the original matrix.
pub fn reduced_npm_run(
    a_proj: &DenseMatrix,
    u0: &StiefelFrame,
    cfg: &NpmConfig,
) -> Result<NpmRunReport> {
    if u0.r() >= u0.n() {
        return Err(Error::Shape(format!(
            "reduced run needs m < r, got m = {}, r = {}",
            u0.r(),
            u0.n()
        )));
    }
    npm_run(a_proj, u0, cfg, Variant::Plain, None)
}

/// Every iterate `U[0], ..., U[steps]` with no stopping rule.
pub fn npm_trajectory(
    a: &DenseMatrix,
    u0: &StiefelFrame,
    steps: usize,
    variant: Variant,
    z_floor: f64,
) -> Result<Vec<StiefelFrame>> {
    check_shapes(a, u0)?;
    let mut out = Vec::with_capacity(steps + 1);
    out.push(u0.clone());
    for k in 1..=steps {
        let next = variant.step(a, &out[k - 1], z_floor).map_err(|e| e.at_step(k))?;
        out.push(next);
    }
    Ok(out)
}
