use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: missing mandatory column `{column}`")]
    MissingColumn { path: PathBuf, column: String },

    #[error("{path}: row {row} has no value for `{column}`")]
    MissingField {
        path: PathBuf,
        row: usize,
        column: String,
    },

    #[error("dataset `{0}` has no records")]
    EmptyDataset(String),

    #[error("duplicate record id `{0}`")]
    DuplicateId(String),

    #[error("dataset needs at least 2 {kind}, found {found}")]
    TooFewLabels { kind: &'static str, found: usize },

    #[error("unknown record id `{0}`")]
    UnknownId(String),

    #[error("unknown group label `{0}`")]
    UnknownGroup(String),

    #[error("unknown class label `{0}`")]
    UnknownClass(String),

    #[error("gap needs two distinct groups, got `{0}` twice")]
    IdenticalGroups(String),

    #[error("no record carries a prediction")]
    NoPredictions,

    #[error("invalid schema: {0}")]
    InvalidSchema(String),

    #[error("invalid sampling request: {0}")]
    InvalidSampling(String),

    #[error("invalid plan: {0}")]
    InvalidPlan(String),

    #[error("predictor failed on replicate (size {size}, index {index}): {message}")]
    Predictor {
        size: usize,
        index: usize,
        message: String,
    },

    #[error("no defined values to summarize")]
    AllUndefined,

    #[error("invalid statistical input: {0}")]
    InvalidStats(String),

    #[error("invalid population spec at {location}: {message}")]
    InvalidSpec { location: String, message: String },

    #[error("invalid debias configuration: {0}")]
    InvalidDebiasConfig(String),

    #[error("malformed report: {0}")]
    MalformedReport(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
