use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid data file {name}: {reason}")]
    DataFile { name: String, reason: String },

    #[error("snapshot format error: {0}")]
    SnapshotFormat(String),

    #[error("model format error: {0}")]
    ModelFormat(String),

    #[error("unknown state {0:?}")]
    UnknownState(String),

    #[error("empty vocabulary")]
    EmptyVocabulary,

    #[error("empty group")]
    EmptyGroup,

    #[error("degenerate labels: {0}")]
    DegenerateLabels(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("missing locales: {0:?}")]
    MissingLocales(Vec<String>),

    #[error("locales below minimum size {min}: {locales:?}")]
    LocaleTooSmall { min: usize, locales: Vec<String> },

    #[error("topic {topic} out of range (model has {topics} topics)")]
    TopicOutOfRange { topic: usize, topics: usize },

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
