use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at row {row}, column {col}: {msg}")]
    Parse { row: usize, col: usize, msg: String },

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("manifest error: subject {subject}: {msg}")]
    Manifest { subject: String, msg: String },

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("singular matrix: {0}")]
    SingularMatrix(String),

    #[error("stability error: {0}")]
    Stability(String),

    #[error("undefined metric: {0}")]
    UndefinedMetric(String),

    #[error("invalid labels: {0}")]
    InvalidLabels(String),

    #[error("split error: {0}")]
    Split(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("subject {subject}: {source}")]
    Subject {
        subject: String,
        #[source]
        source: Box<Error>,
    },

    #[error("cross-validation split {split} failed: {source}")]
    CvSplit {
        split: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
