use thiserror::Error;

/// Errors reported by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value is outside the documented domain of an operation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Two arguments refer to different domains (size vectors disagree).
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    /// The request is well-formed but exceeds a hard resource cap.
    #[error("resource limit: {0}")]
    ResourceLimit(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn mismatch(msg: impl Into<String>) -> Self {
        Error::DomainMismatch(msg.into())
    }

    pub fn limit(msg: impl Into<String>) -> Self {
        Error::ResourceLimit(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
