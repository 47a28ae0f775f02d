use crate::model::Mode;

/// Errors produced anywhere in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("edge budget exceeded: {requested} edges requested, limit is {limit}")]
    Capacity { requested: u128, limit: u64 },

    #[error("{0}")]
    OutOfRange(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("mode mismatch: expected {expected} instance, got {found}")]
    ModeMismatch { expected: Mode, found: Mode },

    #[error("search budget of {limit} nodes exceeded")]
    BudgetExceeded { limit: u64 },

    #[error("method not applicable: {0}")]
    MethodInapplicable(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("lift failed: both cycle edges at the contracted vertex attach to original vertex {endpoint}")]
    LiftFailed { endpoint: u32 },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
