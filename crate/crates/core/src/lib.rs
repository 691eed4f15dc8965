//! Natural power method for dominant invariant subspaces of general square
//! matrices, with model order reduction for discrete-time LTI systems and
//! low-rank observer-based control of a slowly varying LTV plant.

pub mod error;
pub mod experiment;
pub mod io;
pub mod linalg;
pub mod ltv;
pub mod mor;
pub mod npm;

pub use error::{Error, Result};
pub use linalg::{DenseMatrix, StiefelFrame};
