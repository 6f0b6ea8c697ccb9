use crate::algebra::AlgebraError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("congruence violated: {0}")]
    Congruence(String),
    #[error("linear algebra failure: {0}")]
    LinearAlgebra(String),
    #[error("no exponent data for n = {0}")]
    MissingExponent(i64),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
