//! Model order reduction of discrete-time LTI systems onto dominant
//! right and left invariant subspaces.

pub mod gramian;
pub mod reduction;
pub mod system;

pub use gramian::{
    krylov_matrix, observability_gramian, observability_rank, reachability_gramian,
    staircase_rank,
};
pub use reduction::{
    circle_points, dual_subspaces, gramian_projection_residual, minor_left_subspace_check,
    reduced_models, similarity_block_form, spectrum_split_error, transfer_function_eval,
    transfer_mismatch, BlockForm, DualSubspaces, GramianResiduals,
};
pub use system::{BasisTag, LtiSystem, ReducedRealization};
