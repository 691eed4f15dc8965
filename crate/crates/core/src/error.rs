use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is rank deficient (|r_jj| = {pivot:e} at column {column})")]
    RankDeficient { column: usize, pivot: f64 },

    #[error("columns are not orthonormal (||U'U - I||_F = {defect:e})")]
    NotOrthonormal { defect: f64 },

    #[error("matrix is not symmetric (asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("near-singular matrix: smallest eigenvalue {min_eig:e} <= floor {floor:e} x largest {max_eig:e}")]
    NearSingular { min_eig: f64, max_eig: f64, floor: f64 },

    #[error("not an orthogonal projector: {0}")]
    NotProjector(String),

    #[error("no spectral gap at index {index}")]
    NoGap { index: usize },

    #[error("eigenvector matrix is singular (defective or nearly so)")]
    DefectiveEigenbasis,

    #[error("eigenvalue iteration failed to converge after {iterations} sweeps")]
    EigFailed { iterations: usize },

    #[error("cross Gramian V'U is singular (smallest singular value {sigma_min:e})")]
    CrossGramSingular { sigma_min: f64 },

    #[error("resolvent zI - A is singular at z = {re} + {im}i")]
    ResolventSingular { re: f64, im: f64 },

    #[error("pair is not controllable (Krylov sigma_min {sigma_min:e})")]
    Uncontrollable { sigma_min: f64 },

    #[error("pair is not observable (Krylov sigma_min {sigma_min:e})")]
    Unobservable { sigma_min: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),

    #[error("at step {step}: {source}")]
    AtStep { step: usize, source: Box<Error> },
}

impl Error {
    pub(crate) fn at_step(self, step: usize) -> Error {
        Error::AtStep { step, source: Box::new(self) }
    }

    /// Strips any `AtStep` wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtStep { source, .. } => source.root(),
            e => e,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
