//! Dense linear algebra primitives.

pub mod eig;
pub mod factor;
pub mod matrix;
pub mod rng;

pub use eig::{general_eig, Spectrum};
pub use factor::{
    inv_sqrt_spd, numerical_rank, orthonormal_complement, qr_thin, singular_values,
    spectral_norm, sym_eig, SymEig, DEFAULT_FLOOR,
};
pub use matrix::{DenseMatrix, StiefelFrame};
pub use rng::{random_conditioned, random_orthogonal, random_stiefel};
