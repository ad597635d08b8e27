use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the mathematical or physical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A root or eigenvalue could not be bracketed.
    #[error("bracketing failure: {0}")]
    Bracket(String),
    /// An iterative method ran out of iterations.
    #[error("no convergence: {0}")]
    Convergence(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures of a numerical method, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Bracket(_) | Error::Convergence(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
