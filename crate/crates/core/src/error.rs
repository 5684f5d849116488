//! Error types shared across the simulator.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value violates an operation's preconditions.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Internal state became unusable (non-finite entries, broken invariant).
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Configuration rejected before any work started.
    #[error("config error: {0}")]
    Config(String),

    /// Numerical failure with a diagnostic (e.g. Cholesky on a non-SPD matrix).
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Local training produced a non-finite loss.
    #[error("training diverged at round {round}, epoch {epoch}, client {client}")]
    TrainingDiverged {
        round: u64,
        epoch: usize,
        client: usize,
    },

    /// Data partitioning could not satisfy the requested allocation.
    #[error("allocation error: {0}")]
    Allocation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid_argument(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Process exit code for the CLI: 1 for config errors, 2 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 1,
            _ => 2,
        }
    }
}
