use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("maps are not composable: {0}")]
    NotComposable(String),

    #[error("not a chain map: {0}")]
    NotChainMap(String),

    #[error("extension is not small: {0}")]
    NotSmall(String),

    #[error("extension is not acyclic: {0}")]
    NotAcyclic(String),

    #[error("coefficients are not square-zero")]
    NotSquareZero,

    #[error("element is not Maurer-Cartan")]
    NotMaurerCartan,

    #[error("host mismatch: {0}")]
    HostMismatch(String),

    #[error("truncation order {given} too small; need at least {needed}")]
    InsufficientOrder { given: usize, needed: usize },

    #[error("index {index} out of range (max {max})")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Validation(msg.into()))
}
