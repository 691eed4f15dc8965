//! The natural power method `U <- A U (U'A'AU)^{-1/2}` and its variants.

pub mod metrics;
pub mod run;
pub mod step;

pub use metrics::{
    domain_rank_check, fitted_decay_ratio, oja_residual, partial_overlap_distance,
    projected_matrix, subspace_distance, DomainCheck, SubspaceProjector,
};
pub use run::{npm_run, npm_trajectory, reduced_npm_run, NpmConfig, NpmRunReport, Variant};
pub use step::{npm_stationary_step, npm_step};
