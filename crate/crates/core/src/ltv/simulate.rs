//! Closed-loop simulation of the rotating plant under the low-rank
//! observer-based controller.
//!
//! Per sample `k` the controller
//! - advances `U[k]` (dominant right subspace of `A[k]`) and `V[k]`
//!   (dominant left subspace, i.e. of `A[k]'`) by natural power steps,
//! - places the poles of `A_U - L C_U` and `A_V - B_V F` on the 2x2
//!   compressions,
//! - applies `u = -F V' xhat` and the observer
//!   `xhat+ = A xhat + B u + U L (y - C xhat)`.

use std::fmt::Write as _;

use super::placement::{place_observer_si, place_poles_si};
use super::plant::{
    dominant_left_projector, dominant_right_projector, input_matrix, output_matrix,
    rotated_plant, rotation_q,
};
use crate::error::{Error, Result};
use crate::io::format_real;
use crate::linalg::{random_stiefel, spectral_norm, DenseMatrix, StiefelFrame, DEFAULT_FLOOR};
use crate::npm::npm_step;

#[derive(Debug, Clone, PartialEq)]
pub struct LtvScenario {
    pub alpha: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub horizon: usize,
    /// One target per retained dimension; all inside the unit disk.
    pub pole_targets: Vec<f64>,
    pub x0: [f64; 3],
    pub xhat0: [f64; 3],
    /// Seeds the initial frames handed to the warm-up.
    pub seed: u64,
    pub npm_warmup_iters: usize,
    pub npm_iters_per_step: usize,
    pub rank: usize,
}

impl Default for LtvScenario {
    fn default() -> Self {
        LtvScenario {
            alpha: 0.5,
            omega1: 0.01,
            omega2: 0.03,
            horizon: 500,
            pole_targets: vec![0.5, 0.7],
            x0: [1.0, 1.0, 1.0],
            xhat0: [0.0; 3],
            seed: 0,
            npm_warmup_iters: 200,
            npm_iters_per_step: 1,
            rank: 2,
        }
    }
}

impl LtvScenario {
    pub fn with_alpha(alpha: f64) -> Self {
        LtvScenario { alpha, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        if self.npm_iters_per_step == 0 {
            return Err(Error::Config("npm_iters_per_step must be at least 1".into()));
        }
        if self.rank == 0 || self.rank >= 3 {
            return Err(Error::Config(format!("rank {} outside 1..3", self.rank)));
        }
        if self.pole_targets.len() != self.rank {
            return Err(Error::Config(format!(
                "{} pole targets for rank {}",
                self.pole_targets.len(),
                self.rank
            )));
        }
        if self.pole_targets.iter().any(|t| !(t.abs() < 1.0)) {
            return Err(Error::Config("pole targets must lie inside the unit disk".into()));
        }
        let finite = [self.alpha, self.omega1, self.omega2]
            .iter()
            .chain(&self.x0)
            .chain(&self.xhat0)
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Config("non-finite scenario parameter".into()));
        }
        Ok(())
    }

    /// `A[k] = Q[k]' A_alpha Q[k]`.
    pub fn plant_at(&self, k: usize) -> DenseMatrix {
        rotated_plant(self.alpha, k, self.omega1, self.omega2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub k: usize,
    pub norm_x: f64,
    pub norm_err: f64,
    pub u: f64,
    /// `||U U' - P||_2` against the exact dominant right subspace of `A[k]`.
    pub dist_u: f64,
    /// Same for `V` and the dominant left subspace.
    pub dist_v: f64,
    /// Set when either placement failed and the previous gain was held.
    pub gain_flag: bool,
    /// Observer gain in frame coordinates, `r x 1`.
    pub observer_gain: DenseMatrix,
    /// Feedback gain in frame coordinates, `1 x r`.
    pub feedback_gain: DenseMatrix,
    /// `U L`, the observer injection in state coordinates.
    pub injection: DenseMatrix,
    /// `F V'`, the feedback row in state coordinates.
    pub state_feedback: DenseMatrix,
    pub frame_u: DenseMatrix,
    pub frame_v: DenseMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryLog {
    pub records: Vec<StepRecord>,
}

impl TrajectoryLog {
    pub const CSV_HEADER: &'static str = "k,norm_x,norm_err,u,dist_U,dist_V,gain_flag";

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.records.len() + 1));
        out.push_str(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.k,
                format_real(r.norm_x),
                format_real(r.norm_err),
                format_real(r.u),
                format_real(r.dist_u),
                format_real(r.dist_v),
                u8::from(r.gain_flag)
            );
        }
        out
    }

    /// First `k` from which `norm_x` and `norm_err` stay below `bound`
    /// through the end of the log.
    pub fn settles_below(&self, bound: f64) -> Option<usize> {
        let mut since = None;
        for r in &self.records {
            if r.norm_x < bound && r.norm_err < bound {
                since.get_or_insert(r.k);
            } else {
                since = None;
            }
        }
        since
    }
}

fn advance(a: &DenseMatrix, u: StiefelFrame, iters: usize) -> Result<StiefelFrame> {
    (0..iters).try_fold(u, |u, _| npm_step(a, &u, DEFAULT_FLOOR))
}

fn norm(v: &DenseMatrix) -> f64 {
    v.frobenius_norm()
}

pub fn ltv_simulate(scenario: &LtvScenario) -> Result<TrajectoryLog> {
    scenario.validate()?;
    let r = scenario.rank;
    let b = input_matrix();
    let c = output_matrix();
    let p_right = dominant_right_projector(scenario.alpha);
    let p_left = dominant_left_projector(scenario.alpha);

    let a0 = scenario.plant_at(0);
    let mut u_frame = advance(&a0, random_stiefel(3, r, scenario.seed), scenario.npm_warmup_iters)
        .map_err(|e| e.at_step(0))?;
    let mut v_frame = advance(
        &a0.transpose(),
        random_stiefel(3, r, scenario.seed.wrapping_add(1)),
        scenario.npm_warmup_iters,
    )
    .map_err(|e| e.at_step(0))?;

    let mut x = DenseMatrix::column(&scenario.x0)?;
    let mut xhat = DenseMatrix::column(&scenario.xhat0)?;
    let mut l_gain = DenseMatrix::zeros(r, 1);
    let mut f_gain = DenseMatrix::zeros(1, r);
    let mut records = Vec::with_capacity(scenario.horizon);

    for k in 0..scenario.horizon {
        let a = scenario.plant_at(k);
        if k > 0 {
            u_frame = advance(&a, u_frame, scenario.npm_iters_per_step).map_err(|e| e.at_step(k))?;
            v_frame = advance(&a.transpose(), v_frame, scenario.npm_iters_per_step)
                .map_err(|e| e.at_step(k))?;
        }
        let (um, vm) = (u_frame.matrix(), v_frame.matrix());

        let a_u = um.tr_mul(&(&a * um));
        let c_u = &c * um;
        let a_v = vm.tr_mul(&(&a * vm));
        let b_v = vm.tr_mul(&b);

        let mut gain_flag = false;
        match place_observer_si(&a_u, &c_u, &scenario.pole_targets) {
            Ok(l) => l_gain = l,
            Err(Error::Unobservable { .. }) => gain_flag = true,
            Err(e) => return Err(e.at_step(k)),
        }
        match place_poles_si(&a_v, &b_v, &scenario.pole_targets) {
            Ok(f) => f_gain = f,
            Err(Error::Uncontrollable { .. }) => gain_flag = true,
            Err(e) => return Err(e.at_step(k)),
        }

        let injection = um * &l_gain;
        let state_feedback = &f_gain * &vm.transpose();
        let u_in = -(&state_feedback * &xhat).get(0, 0);
        let y = (&c * &x).get(0, 0);

        let q = rotation_q(k, scenario.omega1, scenario.omega2);
        let rot = |p: &DenseMatrix| &(&q.transpose() * p) * &q;
        let dist_u = spectral_norm(&(&u_frame.projector_matrix() - &rot(&p_right)));
        let dist_v = spectral_norm(&(&v_frame.projector_matrix() - &rot(&p_left)));

        records.push(StepRecord {
            k,
            norm_x: norm(&x),
            norm_err: norm(&(&x - &xhat)),
            u: u_in,
            dist_u,
            dist_v,
            gain_flag,
            observer_gain: l_gain.clone(),
            feedback_gain: f_gain.clone(),
            injection: injection.clone(),
            state_feedback,
            frame_u: um.clone(),
            frame_v: vm.clone(),
        });

        let innovation = y - (&c * &xhat).get(0, 0);
        let bu = b.scale(u_in);
        xhat = &(&(&a * &xhat) + &bu) + &injection.scale(innovation);
        x = &(&a * &x) + &bu;
    }
    Ok(TrajectoryLog { records })
}
