use thiserror::Error;

/// Errors raised by model evaluation, path construction and the solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two atoms of a pair potential came too close to evaluate.
    #[error("atoms {0} and {1} coincide (r < {2:e})")]
    CoincidentAtoms(usize, usize, f64),

    #[error("model does not provide {0}")]
    Unsupported(&'static str),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("path has zero length")]
    ZeroLength,

    #[error("energy {energy} is below the path maximum of U ({max_u})")]
    InfeasibleEnergy { energy: f64, max_u: f64 },

    #[error("non-finite value at node {0}")]
    NonFinite(usize),

    #[error("singular tridiagonal pivot at row {0}")]
    SingularPivot(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
