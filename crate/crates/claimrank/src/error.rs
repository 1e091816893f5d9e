use std::io;
use std::path::{Path, PathBuf};

use claimrank_core::Error as CoreError;

/// Errors surfaced by loaders, drivers and the command line.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },
    #[error("{}:{line}: {message}", path.display())]
    Parse { path: PathBuf, line: usize, message: String },
    #[error("{}:{line}: {message}", path.display())]
    Validation { path: PathBuf, line: usize, message: String },
    #[error("{}: {source}", path.display())]
    Data { path: PathBuf, source: CoreError },
    #[error("configuration: {0}")]
    Config(String),
    #[error("{stage}: {source}")]
    Stage { stage: &'static str, source: CoreError },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn read(path: &Path, source: io::Error) -> Error {
        Error::Read { path: path.to_path_buf(), source }
    }

    pub fn write(path: &Path, source: io::Error) -> Error {
        Error::Write { path: path.to_path_buf(), source }
    }

    pub fn stage(stage: &'static str) -> impl FnOnce(CoreError) -> Error {
        move |source| Error::Stage { stage, source }
    }

    /// Process exit status: 2 for bad input or configuration, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Read { .. } | Error::Parse { .. } | Error::Validation { .. } | Error::Data { .. } | Error::Config(_) => 2,
            Error::Write { .. } => 3,
            Error::Stage { source, .. } => match source {
                CoreError::NonFinite { .. } | CoreError::DimensionMismatch { .. } => 3,
                _ => 2,
            },
        }
    }
}
