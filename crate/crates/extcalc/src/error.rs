use std::path::PathBuf;

use extcalc_core::Error as CoreError;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    /// 2 for unreadable input, 4 for exhausted limits, 3 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Json { .. } | CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                CoreError::Parse(_)
                | CoreError::InvalidSignature(_)
                | CoreError::UnknownName(_)
                | CoreError::ArityMismatch { .. }
                | CoreError::UnboundVariable(_)
                | CoreError::InvalidPresentation(_) => 2,
                CoreError::LimitsExceeded(_) | CoreError::CarrierTooLarge { .. } => 4,
                _ => 3,
            },
        }
    }

    /// Short machine-readable name of the failure.
    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "parse-error",
            4 => "limits-exceeded",
            _ => "validation-failure",
        }
    }
}
