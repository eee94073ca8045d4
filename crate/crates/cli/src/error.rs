use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config file {0} is empty")]
    EmptyConfig(PathBuf),
    #[error("cannot read config {path}: {source}")]
    ReadConfig {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid config key `{key}`: {reason}")]
    Invalid { key: String, reason: String },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Thermo(#[from] gasfold::ThermoError),
    #[error(transparent)]
    Family(#[from] gasfold::FamilyError),
    #[error(transparent)]
    Singularity(#[from] gasfold::SingularityError),
    #[error("{failed} of {total} checks failed: {ids}")]
    ChecksFailed {
        failed: usize,
        total: usize,
        ids: String,
    },
}

impl CliError {
    pub(crate) fn invalid(key: &str, reason: impl Into<String>) -> Self {
        Self::Invalid {
            key: key.to_owned(),
            reason: reason.into(),
        }
    }

    /// 2 for usage and config problems, 1 for everything computed.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::EmptyConfig(_)
            | Self::ReadConfig { .. }
            | Self::Parse { .. }
            | Self::Invalid { .. } => 2,
            _ => 1,
        }
    }
}
