use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("z = {z} is a pole{}", term.map(|j| format!(" of rational term {j}")).unwrap_or_default())]
    Pole { z: Complex64, term: Option<usize> },

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("weight classification conflict: {0}")]
    ClassificationConflict(String),

    #[error("matrix polynomial has degree zero; nothing to linearize")]
    DegreeZero,

    #[error("dense eigensolver failed: {0}")]
    SolverFailure(String),

    #[error(
        "Newton refinement did not converge after {iterations} iterations (residual {residual:e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("no structured map exists: {0}")]
    Infeasible(String),

    #[error("eigenvalue is not simple: |y^* G'(lambda) x| = {0:e}")]
    NotSimple(f64),

    #[error("structure mismatch: {0}")]
    StructureMismatch(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures caused by reading or decoding input files.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Io(_) | Error::Parse(_) | Error::DimensionMismatch(_) | Error::InvalidWeight(_)
        )
    }
}
