use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input violates a precondition (non-finite entries, asymmetry, unphysical state).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// An internal computation left its expected range or failed to converge.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    /// The requested closed form is not defined on this parameter branch.
    #[error("degenerate branch: {0}")]
    DegenerateBranch(String),
}

impl Error {
    /// Process exit code for the CLI: 1 for bad input, 2 for numerical trouble.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) => 1,
            Error::NumericalFailure(_) | Error::DegenerateBranch(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn numerical(msg: impl Into<String>) -> Error {
    Error::NumericalFailure(msg.into())
}

pub(crate) fn degenerate(msg: impl Into<String>) -> Error {
    Error::DegenerateBranch(msg.into())
}
