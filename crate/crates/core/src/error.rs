use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("{0}")]
    Hypothesis(String),

    #[error("log-derivative of zero series")]
    ZeroSeries,

    #[error("indeterminate composition; raise truncation (offset {offset}, truncation {truncation})")]
    IndeterminateComposition { offset: i64, truncation: usize },

    #[error("order uncertified at offset {offset} with truncation {truncation}")]
    OrderUncertified { offset: i64, truncation: usize },

    #[error("truncation cap {cap} exhausted: {last}")]
    TruncationExhausted { cap: usize, last: String },

    #[error("formula singular; use cascade directly")]
    FormulaSingular,

    #[error("insufficient certified entries: need {need}, have {have}")]
    InsufficientEntries { need: usize, have: usize },

    #[error("{0}")]
    Numeric(String),

    #[error("pole at {0}")]
    Pole(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
