use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum KorobovError {
    /// A parameter lies outside the domain where an operation is defined,
    /// e.g. a kernel requested for `alpha <= 1`.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The problem has no finite solution (e.g. `alpha = 0` makes every
    /// eigenvalue equal to one).
    #[error("approximation not solvable: {0}")]
    NotSolvable(String),

    #[error("{what} exceeds cap {cap}")]
    CapExceeded { what: String, cap: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("sequence value {value} violates the bound {bound}")]
    BoundViolation { value: f64, bound: f64 },

    #[error("infeasible configuration: {0}")]
    Infeasible(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// A consistency check of the crate's own output failed.
    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, KorobovError>;

impl KorobovError {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            KorobovError::Config(_)
            | KorobovError::InvalidParameter(_)
            | KorobovError::InvalidWeights(_)
            | KorobovError::Domain(_)
            | KorobovError::DimensionMismatch { .. }
            | KorobovError::NotPrime(_)
            | KorobovError::Json(_) => 2,
            KorobovError::CapExceeded { .. }
            | KorobovError::Infeasible(_)
            | KorobovError::NotSolvable(_) => 3,
            KorobovError::BoundViolation { .. } | KorobovError::Internal(_) | KorobovError::Io(_) => 1,
        }
    }
}
