use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid arguments or violated preconditions.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("arithmetic overflow evaluating {0}")]
    Overflow(String),

    /// A search ran out of node expansions before certifying its answer.
    #[error("budget of {budget} nodes exhausted; best bracket [{lower}, {upper}]")]
    Budget { budget: u64, lower: u64, upper: u64 },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// An internal consistency check failed. Always a bug.
    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}
