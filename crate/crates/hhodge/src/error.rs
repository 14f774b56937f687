use std::path::PathBuf;

use hhodge_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Json {
        context: String,
        source: serde_json::Error,
    },

    #[error("{0}")]
    Usage(String),

    #[error("verification failed: {0} failing checks")]
    VerifyFailed(usize),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    /// 0 ok, 2 bad input, 3 missing data, 4 degenerate or singular system,
    /// 5 verification failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                CoreError::MissingGamma(_) | CoreError::MissingInitial(_) => 3,
                CoreError::DegenerateWeight { .. } | CoreError::Singular(_) => 4,
                _ => 2,
            },
            CliError::Io { .. } | CliError::Json { .. } | CliError::Usage(_) => 2,
            CliError::VerifyFailed(_) => 5,
        }
    }
}

pub(crate) fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
