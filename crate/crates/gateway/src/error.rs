use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum GatewayError {
    #[error(transparent)]
    Core(#[from] t4f_core::Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid task result {path}: {source}")]
    RunFormat {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("duplicate run id {0:?}")]
    DuplicateRun(String),
}
