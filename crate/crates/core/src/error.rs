use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Bad input: out of range, wrong shape, violated precondition.
    #[error("validation error: {0}")]
    Validation(String),
    /// A presentation or weight is not deep enough for the requested operation.
    #[error("genericity error: {0}")]
    Genericity(String),
    /// An alcove or element left the upper-arrow search box.
    #[error("outside the upper-arrow box of radius {radius}: {what}")]
    OutOfBox { radius: i64, what: String },
    /// Exact arithmetic hit a zero divisor.
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    /// Something that must hold by construction did not.
    #[error("internal invariant failure: {0}")]
    Invariant(String),
}

impl Error {
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Invariant(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Validation(msg.into()))
}

pub(crate) fn invariant<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invariant(msg.into()))
}
