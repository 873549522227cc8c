use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] ergm_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("json: {0}")]
    Json(serde_json::Error),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 2 invalid arguments, 3 capacity, 4 I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Core(ergm_core::Error::Capacity { .. }) => 3,
            Self::Core(_) | Self::Usage(_) => 2,
            Self::Io { .. } | Self::Json(_) => 4,
        }
    }
}
