use std::path::PathBuf;

use thiserror::Error;

/// Process exit statuses.
pub mod exit {
    pub const OK: u8 = 0;
    /// A verification ran and did not meet its tolerance.
    pub const CHECK_FAILED: u8 = 1;
    /// Bad configuration, flag or argument.
    pub const VALIDATION: u8 = 2;
    /// Quadrature or oracle failed to converge.
    pub const CONVERGENCE: u8 = 3;
    /// Reading or writing a file failed.
    pub const IO: u8 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid value for `{field}`: {reason}")]
    Validation { field: String, reason: String },

    #[error("unknown configuration key `{key}` (line {line})")]
    UnknownKey { key: String, line: usize },

    #[error("{0}")]
    Convergence(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Core(#[from] xidd_core::Error),
}

impl CliError {
    pub fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Self::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Validation { .. } | Self::UnknownKey { .. } => exit::VALIDATION,
            Self::Convergence(_) => exit::CONVERGENCE,
            Self::Io { .. } => exit::IO,
            Self::Core(e) => match e {
                xidd_core::Error::Convergence { .. }
                | xidd_core::Error::Truncation { .. }
                | xidd_core::Error::SubstepConvergence { .. }
                | xidd_core::Error::Singular => exit::CONVERGENCE,
                _ => exit::VALIDATION,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
