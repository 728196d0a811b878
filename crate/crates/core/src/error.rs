use thiserror::Error;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input could not be parsed or is structurally invalid.
    #[error("malformed input: {0}")]
    Malformed(String),
    /// Input parsed but violates an operation's precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The requested set / space / functional combination is not handled.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A certificate failed independent re-verification. Always a bug.
    #[error("certificate verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Verification(msg()))
    }
}
