use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("design matrix is rank deficient (columns are collinear)")]
    RankDeficient,

    #[error("insufficient data: {rows} observations for {params} parameters")]
    InsufficientData { rows: usize, params: usize },

    #[error("response has zero total variance")]
    DegenerateVariance,

    #[error("models are not nested: {0}")]
    InvalidNesting(String),

    #[error("condition {0} has no successful trials")]
    EmptyCondition(String),

    #[error("invalid ground truth: {0}")]
    InvalidTruth(String),

    #[error("degenerate bone vector (norm {0:e})")]
    DegenerateBone(f64),

    #[error("invalid design matrix: {0}")]
    InvalidMatrix(String),

    #[error("parse error at line {line}, column {column}: {reason}")]
    Parse { line: u64, column: usize, reason: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
