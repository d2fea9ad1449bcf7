use thiserror::Error;

/// Errors raised across the crate.
///
/// Failed certifications inside a pipeline run are recorded as values in the
/// report; `Validation` is used when a single stage is asked to succeed.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: String, got: String },
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("validation failed ({stage}): {detail}")]
    Validation { stage: String, detail: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn validation(stage: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Validation {
            stage: stage.into(),
            detail: detail.into(),
        }
    }

    pub fn shape(expected: impl ToString, got: impl ToString) -> Self {
        Error::Shape {
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }
}
