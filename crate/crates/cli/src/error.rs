use thiserror::Error;

/// Failure of a CLI command, split by exit status.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad configuration file or flag values.
    #[error("invalid configuration: {0}")]
    Config(String),
    /// The run itself failed (simulation error, I/O).
    #[error("run failed: {0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }

    pub(crate) fn io(what: &str, e: std::io::Error) -> Self {
        CliError::Runtime(format!("{what}: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
