use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{context}: {source}")]
    Numeric {
        context: String,
        #[source]
        source: trigint::Error,
    },
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
}

impl CliError {
    /// 2 for configuration problems, 3 for everything that fails while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric { .. } | CliError::Io { .. } => 3,
        }
    }

    pub(crate) fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            reason: err.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Attaches a sweep-point label to library errors.
pub(crate) trait Context<T> {
    fn at(self, context: impl FnOnce() -> String) -> CliResult<T>;
}

impl<T> Context<T> for trigint::Result<T> {
    fn at(self, context: impl FnOnce() -> String) -> CliResult<T> {
        self.map_err(|source| CliError::Numeric {
            context: context(),
            source,
        })
    }
}
