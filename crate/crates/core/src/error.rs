use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("budget exceeded: {what} (limit {limit})")]
    Budget { what: String, limit: u64 },

    #[error("incomplete classification: mass deficit {deficit} (found {found} of {expected})")]
    Incomplete {
        deficit: String,
        found: String,
        expected: String,
    },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 2,
            Error::Validation(_) | Error::Precondition(_) => 3,
            Error::Budget { .. } => 4,
            Error::Incomplete { .. } => 5,
            Error::Invariant(_) | Error::Io(_) => 1,
        }
    }
}
