use std::path::Path;

use thiserror::Error;

/// Failure of a command, mapped to a stable exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Inputs that cannot be paired up: differing line counts, unmatched or
    /// repeated report ids, empty corpora.
    #[error("alignment error: {0}")]
    Alignment(String),
    /// Malformed input files or config, located by file and line.
    #[error("parse error: {0}")]
    Parse(String),
    /// Bad flags or flag values.
    #[error("usage error: {0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Alignment(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Usage(_) => 4,
            CliError::Io(_) | CliError::Runtime(_) => 1,
        }
    }

    pub fn parse_at(path: &Path, line: Option<usize>, msg: impl std::fmt::Display) -> Self {
        match line {
            Some(l) => CliError::Parse(format!("{}:{l}: {msg}", path.display())),
            None => CliError::Parse(format!("{}: {msg}", path.display())),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
