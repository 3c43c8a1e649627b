use crate::lattice::LatticeError;
use crate::model::ModelError;
use thiserror::Error;

/// Broad classes of failure, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or out-of-domain input.
    Input,
    /// An iterative method stopped before reaching its tolerance.
    NonConvergence,
    /// An identity that must hold exactly was violated; this is a bug.
    Identity,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("expected {expected} coefficients, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("class is not big: {0}")]
    NotBig(String),
    #[error("atom at the trivial valuation is not supported here")]
    TrivialValuation,
    #[error("optimizer did not converge in {iters} iterations (best value {best})")]
    NonConvergence { iters: usize, best: f64 },
    #[error("objective is unbounded along coordinate {0}")]
    Unbounded(usize),
    #[error("quadrature did not reach tolerance {0}")]
    Quadrature(f64),
    #[error("mass at component {index} is {got}, expected {expected}")]
    MeasureMismatch {
        index: usize,
        expected: String,
        got: String,
    },
    #[error("identity violated: {0}")]
    Identity(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::NonConvergence { .. }
            | Error::Unbounded(_)
            | Error::Quadrature(_)
            | Error::MeasureMismatch { .. } => ErrorKind::NonConvergence,
            Error::Identity(_) => ErrorKind::Identity,
            Error::Model(ModelError::Invariant(_)) | Error::Model(ModelError::SingularGram) => {
                ErrorKind::Identity
            }
            _ => ErrorKind::Input,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
