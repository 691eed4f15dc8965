mod common;

use common::props;
use natpow::linalg::general_eig;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn config() -> Config {
    Config {
        cases: 200,
        rng_seed: RngSeed::Fixed(0x6e70_6d00),
        failure_persistence: None,
        ..Config::default()
    }
}

/// `(n, r, seed)` with `1 <= r <= n <= 10`.
fn dims() -> impl Strategy<Value = (usize, usize, u64)> {
    (1usize..=10).prop_flat_map(|n| (Just(n), 1..=n, any::<u64>()))
}

fn holds(check: props::Check) -> Result<(), TestCaseError> {
    check.map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn steps_stay_on_stiefel((n, r, seed) in dims()) {
        holds(props::stiefel_preservation(n, r, seed))?;
    }

    #[test]
    fn positive_scaling_leaves_iterates((n, r, seed) in dims(), log_c in -3.0f64..3.0) {
        holds(props::scale_law(n, r, seed, 10f64.powf(log_c)))?;
    }

    #[test]
    fn similarity_equivariance((n, r, seed) in dims()) {
        holds(props::similarity_equivariance(n, r, seed))?;
    }

    #[test]
    fn variants_share_projectors((n, r, seed) in dims()) {
        holds(props::variant_projectors(n, r, seed))?;
    }

    #[test]
    fn general_eig_agrees_with_sym_eig((n, _r, seed) in dims()) {
        holds(props::general_vs_sym_eig(n, seed))?;
    }

    #[test]
    fn general_eig_residual_small(n in 1usize..=10, seed in any::<u64>()) {
        holds(props::general_eig_residual(n, seed))?;
    }

    #[test]
    fn psi_formulas_match_oracle(alpha in -0.95f64..0.95) {
        holds(props::psi_formulas(alpha))?;
    }
}

#[test]
fn gap_matrices_have_their_spectra() {
    for seed in 0..20 {
        let g = common::gap_matrix_seeded(seed, 6, 2);
        let spec = general_eig(&g.a).unwrap();
        for (z, l) in spec.eigenvalues().iter().zip(&g.eigenvalues) {
            assert!((z.re - l).abs() < 1e-10 && z.im.abs() < 1e-10);
        }
        assert!(spec.has_gap_at(2));
    }
}
