use thiserror::Error;

/// Errors produced by domain construction, assembly and verification.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("invalid dimension {0}: must be at least 1")]
    InvalidDimension(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("omega must be nonempty")]
    EmptyOmega,

    /// A connected component of the closure graph contains no boundary
    /// vertex, so the interior block is singular on it.
    #[error("degenerate closure: component containing {component} has no boundary vertex")]
    DegenerateClosure { component: String },

    #[error("vertices {a} and {b} lie in different components")]
    DisconnectedPair { a: usize, b: usize },

    #[error("matrix is not symmetric (relative asymmetry {0:e})")]
    NonSymmetric(f64),

    #[error("invalid trial family: {0}")]
    InvalidTrialFamily(String),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("problem too large: {0}")]
    TooLarge(String),

    #[error("linear solve failed: {0}")]
    Solver(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
