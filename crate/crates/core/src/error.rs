use thiserror::Error;

/// Errors surfaced by the core operations.
///
/// `Internal` is reserved for violated invariants that indicate a bug in this
/// crate (the CLI maps it to a distinct exit code); everything else reports a
/// problem with the caller's input or an exhausted search budget.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vocabulary mismatch: {0}")]
    VocabMismatch(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("element {element} out of universe of size {universe}")]
    OutOfUniverse { element: usize, universe: usize },
    #[error("invalid {what}: {why}")]
    Invalid { what: &'static str, why: String },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(what: &'static str, why: impl Into<String>) -> Self {
        Error::Invalid { what, why: why.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
