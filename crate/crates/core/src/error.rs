//! Error surface shared by the library and the CLI.
//!
//! Errors are grouped by how the CLI must exit: usage and configuration
//! problems (exit 1), bad or missing data (exit 2), and internal invariant
//! violations that indicate a bug rather than bad input (exit 3).

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: not a git repository")]
    NotARepository { path: PathBuf },

    #[error("{path}: cannot read git object store: {detail}")]
    ObjectStore { path: PathBuf, detail: String },

    #[error("{path}:{line}: unparseable catalog line: {detail}")]
    Catalog {
        path: PathBuf,
        line: usize,
        detail: String,
    },

    #[error("{path}:{line}: invalid fragment: {detail}")]
    FragmentFile {
        path: PathBuf,
        line: usize,
        detail: String,
    },

    #[error("{path}:{line}: invalid ground-truth row: {detail}")]
    TruthFile {
        path: PathBuf,
        line: usize,
        detail: String,
    },

    #[error("corpus error: {0}")]
    Corpus(String),

    #[error("corrupted index for project {project}: {detail}")]
    CorruptIndex { project: String, detail: String },

    #[error("invalid method encoding `{0}`")]
    MethodEncoding(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code this error maps to: 1 usage/config, 2 data, 3 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Config(_) => 1,
            Error::Invariant(_) => 3,
            _ => 2,
        }
    }
}
