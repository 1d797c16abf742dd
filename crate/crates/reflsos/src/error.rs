use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] reflsos_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// `2` for invalid input, `3` for exhausted budgets, `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        use reflsos_core::Error as E;
        match self {
            CliError::Parse { .. } | CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Core(E::Budget { .. }) => 3,
            CliError::Core(E::Internal(_)) | CliError::Json(_) => 1,
            CliError::Core(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
