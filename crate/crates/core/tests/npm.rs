mod common;

use natpow::experiment::{benchmark_initial_frame, benchmark_projector};
use natpow::linalg::{general_eig, random_stiefel, DenseMatrix, StiefelFrame, DEFAULT_FLOOR};
use natpow::ltv::{a_alpha, a_alpha_eigenvectors};
use natpow::npm::{
    fitted_decay_ratio, npm_run, npm_stationary_step, npm_step, npm_trajectory, oja_residual,
    partial_overlap_distance, projected_matrix, reduced_npm_run, subspace_distance, NpmConfig,
    SubspaceProjector, Variant,
};

fn column(v: &[f64]) -> StiefelFrame {
    StiefelFrame::orthonormalize(&DenseMatrix::column(v).unwrap()).unwrap()
}

#[test]
fn one_step_convergence_at_alpha_zero() {
    let u0 = benchmark_initial_frame(0.0, 2, 1.0).unwrap();
    let u1 = npm_step(&a_alpha(0.0), &u0, DEFAULT_FLOOR).unwrap();
    assert!(subspace_distance(&u1, &benchmark_projector(0.0).unwrap()) <= 1e-10);
}

#[test]
fn stationary_fixed_point_from_oracle_eigenvectors() {
    let a = a_alpha(0.5);
    let spec = general_eig(&a).unwrap();
    let psi = spec.eigenvector_matrix().map(|z| z.re);
    let u = StiefelFrame::orthonormalize(&DenseMatrix::from_na(psi.columns(0, 2).into_owned()).unwrap()).unwrap();
    let stat = npm_stationary_step(&a, &u, DEFAULT_FLOOR).unwrap();
    assert!((stat.matrix() - u.matrix()).frobenius_norm() <= 1e-9);
    // the plain step moves the frame but not its span
    let plain = npm_step(&a, &u, DEFAULT_FLOOR).unwrap();
    assert!((plain.matrix() - u.matrix()).frobenius_norm() > 1e-3);
    assert!((&plain.projector_matrix() - &u.projector_matrix()).max_abs() < 1e-12);
}

#[test]
fn plain_step_alternates_at_the_benchmark_fixed_point() {
    // A_U has eigenvalues 1 and -1, so its polar factor is a reflection and
    // the plain iteration has period two on frames
    let a = a_alpha(0.5);
    let u = benchmark_initial_frame(0.5, 2, 1.0).unwrap();
    let run = npm_run(&a, &u, &NpmConfig::default(), Variant::Plain, None).unwrap();
    let u1 = npm_step(&a, &run.final_frame, DEFAULT_FLOOR).unwrap();
    let u2 = npm_step(&a, &u1, DEFAULT_FLOOR).unwrap();
    assert!((u1.matrix() - run.final_frame.matrix()).frobenius_norm() > 1e-3);
    assert!((u2.matrix() - run.final_frame.matrix()).frobenius_norm() < 1e-9);
}

#[test]
fn variant_projectors_on_hand_example() {
    let a = DenseMatrix::from_diagonal(&[2.0, 1.0]).unwrap();
    let h = 0.5f64.sqrt();
    let u = column(&[h, h]);
    let plain = npm_step(&a, &u, DEFAULT_FLOOR).unwrap();
    let stat = npm_stationary_step(&a, &u, DEFAULT_FLOOR).unwrap();
    assert!((&plain.projector_matrix() - &stat.projector_matrix()).max_abs() <= 1e-12);
}

#[test]
fn distance_history_rate_alpha_02() {
    let u0 = benchmark_initial_frame(0.2, 2, 1.0).unwrap();
    let p = benchmark_projector(0.2).unwrap();
    let run = npm_run(&a_alpha(0.2), &u0, &NpmConfig::default(), Variant::Plain, Some(&p)).unwrap();
    assert!(run.converged);
    let d = run.distance_history.unwrap();
    let fit = fitted_decay_ratio(&d, 1e-10, 1e-2).unwrap();
    assert!((fit - 0.2).abs() < 0.03, "{fit}");
}

#[test]
fn symmetric_diag_rate() {
    let a = DenseMatrix::from_diagonal(&[3.0, 2.0, 1.0]).unwrap();
    let p = SubspaceProjector::from_frame(&StiefelFrame::canonical(3, 2));
    let run = npm_run(&a, &random_stiefel(3, 2, 9), &NpmConfig::default(), Variant::Plain, Some(&p)).unwrap();
    assert!(run.converged);
    let fit = fitted_decay_ratio(&run.distance_history.unwrap(), 1e-10, 1e-2).unwrap();
    assert!((fit - 0.5).abs() < 0.075, "{fit}");
}

#[test]
fn identity_run_has_constant_distance() {
    let u0 = random_stiefel(4, 2, 3);
    let p = SubspaceProjector::from_frame(&StiefelFrame::canonical(4, 2));
    let run = npm_run(&DenseMatrix::identity(4), &u0, &NpmConfig::default(), Variant::Plain, Some(&p)).unwrap();
    assert_eq!(run.iterations, 1);
    assert!(run.converged);
    let d = run.distance_history.unwrap();
    assert!((d[0] - subspace_distance(&u0, &p)).abs() < 1e-14);
}

#[test]
fn reduced_run_on_a_tie_does_not_settle() {
    // diag(1, -1) flips the second coordinate each step, so a generic
    // rank-one iterate alternates between two lines
    let a_proj = DenseMatrix::from_diagonal(&[1.0, -1.0]).unwrap();
    let u0 = column(&[0.8, 0.6]);
    let run = reduced_npm_run(&a_proj, &u0, &NpmConfig { max_iter: 50, ..Default::default() }).unwrap();
    assert!(!run.converged);
    let u = run.final_frame.matrix();
    assert!((u.get(0, 0).abs() - 0.8).abs() < 1e-14 && (u.get(1, 0).abs() - 0.6).abs() < 1e-14);
    // an eigenvector start is a fixed point
    let run = reduced_npm_run(&a_proj, &column(&[1.0, 0.0]), &NpmConfig::default()).unwrap();
    assert!(run.converged);
}

#[test]
fn reduced_run_stays_in_the_dominant_plane() {
    let a = a_alpha(0.5);
    let u0 = benchmark_initial_frame(0.5, 2, 1.0).unwrap();
    let outer = npm_run(&a, &u0, &NpmConfig::default(), Variant::Plain, None).unwrap();
    let a_proj = projected_matrix(&a, &outer.final_frame).unwrap();
    let inner = reduced_npm_run(&a_proj, &random_stiefel(2, 1, 4), &NpmConfig::default()).unwrap();
    let composed = StiefelFrame::new(outer.final_frame.matrix() * inner.final_frame.matrix()).unwrap();
    assert!(partial_overlap_distance(&composed, &benchmark_projector(0.5).unwrap()) < 1e-8);
}

#[test]
fn partial_overlap_examples() {
    let p = benchmark_projector(0.5).unwrap();
    let [p1, _, _] = a_alpha_eigenvectors(0.5);
    assert!(partial_overlap_distance(&column(&p1), &p) < 1e-15);

    let u0 = benchmark_initial_frame(0.5, 1, 1.0).unwrap();
    let frames = npm_trajectory(&a_alpha(0.5), &u0, 60, Variant::Plain, DEFAULT_FLOOR).unwrap();
    let first = partial_overlap_distance(&frames[0], &p);
    let last = partial_overlap_distance(&frames[60], &p);
    assert!(first > 0.1 && last < 1e-12, "{first} {last}");
}

#[test]
fn converged_frame_keeps_dominant_eigenvalues() {
    let a = a_alpha(0.5);
    let run = npm_run(&a, &benchmark_initial_frame(0.5, 2, 1.0).unwrap(), &NpmConfig::default(), Variant::Plain, None)
        .unwrap();
    let spec = general_eig(&projected_matrix(&a, &run.final_frame).unwrap()).unwrap();
    let mut re: Vec<f64> = spec.eigenvalues().iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    assert!((re[0] + 1.0).abs() < 1e-8 && (re[1] - 1.0).abs() < 1e-8, "{re:?}");
    assert!(spec.eigenvalues().iter().all(|z| z.im.abs() < 1e-12));
}

#[test]
fn scalar_projection_vanishes_for_rank_one() {
    let a = a_alpha(0.5);
    let frames = npm_trajectory(&a, &benchmark_initial_frame(0.5, 1, 1.0).unwrap(), 100, Variant::Plain, DEFAULT_FLOOR)
        .unwrap();
    let a_u: Vec<f64> = frames.iter().map(|u| projected_matrix(&a, u).unwrap().get(0, 0)).collect();
    assert!(a_u[0].abs() > 0.1);
    assert!(a_u[100].abs() < 1e-12);
}

#[test]
fn oja_residual_decreases_along_slow_run() {
    let a = a_alpha(0.9);
    let frames = npm_trajectory(&a, &benchmark_initial_frame(0.9, 2, 1.0).unwrap(), 100, Variant::Plain, DEFAULT_FLOOR)
        .unwrap();
    let r10 = oja_residual(&a, &frames[10]).unwrap();
    let r100 = oja_residual(&a, &frames[100]).unwrap();
    assert!(r100 < r10, "{r10} {r100}");
}

#[test]
fn eigenvector_frames_are_equilibria() {
    let g = common::gap_matrix_seeded(21, 6, 3);
    let u = StiefelFrame::orthonormalize(&g.eigenvectors.columns(0, 3)).unwrap();
    assert!(oja_residual(&g.a, &u).unwrap() < 1e-9);
    let stat = npm_stationary_step(&g.a, &u, DEFAULT_FLOOR).unwrap();
    assert!((stat.matrix() - u.matrix()).frobenius_norm() < 1e-9);
}

#[test]
fn gap_matrices_converge_to_oracle_subspace() {
    for seed in 0..10 {
        let g = common::gap_matrix_seeded(100 + seed, 7, 3);
        let p = SubspaceProjector::new(common::column_projector(&g.eigenvectors, 3)).unwrap();
        let run = npm_run(&g.a, &random_stiefel(7, 3, seed), &NpmConfig::default(), Variant::Stationary, Some(&p))
            .unwrap();
        assert!(run.converged);
        assert!(subspace_distance(&run.final_frame, &p) < 1e-9);
        // the stationary variant converges as a frame too
        let again = npm_stationary_step(&g.a, &run.final_frame, DEFAULT_FLOOR).unwrap();
        assert!((again.matrix() - run.final_frame.matrix()).frobenius_norm() < 1e-9);
    }
}
