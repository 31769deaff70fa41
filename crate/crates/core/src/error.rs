use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// `Contract` means the caller broke an operation's precondition. `Invariant`
/// means a pass produced something its own postcondition rules out, which
/// is always a bug (or an input configuration the rewrite rules do not cover).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZeckError {
    #[error("invalid digit string {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("internal invariant failure: {0}")]
    Invariant(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("corrupt code stream: {0}")]
    Corrupt(String),
}

pub type Result<T, E = ZeckError> = std::result::Result<T, E>;

pub(crate) fn contract(msg: impl Into<String>) -> ZeckError {
    ZeckError::Contract(msg.into())
}

pub(crate) fn invariant(msg: impl Into<String>) -> ZeckError {
    ZeckError::Invariant(msg.into())
}
