use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A requested size is beyond what the operation supports.
    #[error("{what} {requested} exceeds the supported limit {limit}")]
    SizeLimit {
        what: &'static str,
        requested: u64,
        limit: u64,
    },

    /// A domain precondition does not hold (bad parameter combination).
    #[error("{0}")]
    InvalidInput(String),

    /// Text input could not be parsed. Lines are 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A construction schedule failed its build-time validation.
    #[error("schedule rejected: {0}")]
    BadSchedule(String),

    /// Family step-up inputs must be pairwise distinct.
    #[error("duplicate entries: items {0} and {1} are identical")]
    DuplicateEntries(usize, usize),

    /// A constructed word failed its checker.
    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
