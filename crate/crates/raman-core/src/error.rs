use thiserror::Error;

/// Library-wide error type. Every fallible public operation returns one of
/// these; none of them panic on valid-typed input.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// A precondition on an argument was violated (range, sign, shape).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The problem is degenerate and has no meaningful answer (e.g. ζ = 0
    /// estimation, g₁ at zero occupation).
    #[error("degenerate problem: {0}")]
    Degenerate(String),

    /// A numerical routine failed or could not reach its target accuracy.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A discretization step size violates its stability bound.
    #[error("unstable step: {0}")]
    UnstableStep(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
