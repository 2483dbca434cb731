use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("parity-check matrix has rank {found}, need {expected}")]
    RankDeficient { expected: usize, found: usize },

    #[error("invalid code: {0}")]
    Code(String),

    #[error("alist parse error at line {line}: {message}")]
    Alist { line: usize, message: String },

    #[error("{0} is outside the valid domain")]
    Domain(String),

    #[error("config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn config(field: &str, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.to_string(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
