use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group parameter: {0}")]
    InvalidParams(String),
    #[error("parse error at byte {position} near `{token}`: {message}")]
    Parse {
        position: usize,
        token: String,
        message: String,
    },
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("search budget exceeded: {0}")]
    Budget(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
