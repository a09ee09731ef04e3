use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid configuration; `field` names the offending key.
    #[error("invalid config field `{field}`: {message}")]
    Config { field: String, message: String },

    /// Unparseable or invalid input data.
    #[error("invalid data: {0}")]
    Data(String),

    #[error("I/O error on {}: {message}", path.display())]
    Io { path: PathBuf, message: String },
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            message: err.to_string(),
        }
    }

    /// 2 for bad configuration or data, 3 for I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Data(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

/// Maps a core parameter error onto the config field it came from.
pub(crate) fn from_core(err: httool_core::Error, default_field: &str) -> CliError {
    match err {
        httool_core::Error::Domain { name, value, reason } => CliError::config(name, format!("{value}: {reason}")),
        httool_core::Error::Input(msg) => CliError::Data(msg),
        other => CliError::config(default_field, other.to_string()),
    }
}
