use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = KsnError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum KsnError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{location}: {message}")]
    Format { location: String, message: String },
    #[error("{0}")]
    Args(String),
    #[error(transparent)]
    Core(#[from] ksn_core::Error),
}

impl KsnError {
    pub(crate) fn format(location: impl Into<String>, message: impl Into<String>) -> Self {
        KsnError::Format { location: location.into(), message: message.into() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        KsnError::Io { path: path.into(), source }
    }

    /// Process exit status: 0 success, 1 I/O or malformed file,
    /// 2 unrepresentable, 3 grouping ambiguity, 4 bad arguments.
    pub fn exit_code(&self) -> i32 {
        use ksn_core::Error as E;
        match self {
            KsnError::Io { .. } | KsnError::Format { .. } => 1,
            KsnError::Args(_) => 4,
            KsnError::Core(E::Unrepresentable(_)) => 2,
            KsnError::Core(E::GroupingAmbiguity { .. }) => 3,
            KsnError::Core(
                E::Domain { .. } | E::Invalid(_) | E::DimensionMismatch { .. } | E::FloatOnly | E::Size { .. },
            ) => 4,
            KsnError::Core(E::InvalidWitness) => 1,
        }
    }
}
