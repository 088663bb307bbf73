use thiserror::Error;

/// Errors produced by the library. Each variant maps to a distinct
/// process exit code in the CLI (invalid input 2, resource guard 3,
/// numeric instability 4).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource guard exceeded: {0}")]
    ResourceGuard(String),

    #[error("numeric instability: {0}")]
    NumericInstability(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn guard(msg: impl Into<String>) -> Self {
        Error::ResourceGuard(msg.into())
    }

    pub fn unstable(msg: impl Into<String>) -> Self {
        Error::NumericInstability(msg.into())
    }
}
