use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("graph has {0} vertices; at most {max} are supported", max = crate::graph::MAX_VERTICES)]
    TooManyVertices(usize),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("{what} exceeded cap of {cap}")]
    CapExceeded { what: &'static str, cap: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("structural assertion failed: {0}")]
    Structural(String),

    #[error("cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
