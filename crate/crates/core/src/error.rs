use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KhError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Capability(String),
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
    #[error("invariant breach: {0}")]
    Invariant(String),
}

impl KhError {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            KhError::Parse(_) | KhError::Invalid(_) => 2,
            KhError::Capability(_) => 3,
            KhError::SizeCap(_) => 4,
            KhError::Invariant(_) => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, KhError>;
