use thiserror::Error;

/// Failure classes, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    /// Wraps a library error raised while evaluating one parameter point.
    pub fn at_point(context: &str, err: floquet_krylov::Error) -> Self {
        match err {
            floquet_krylov::Error::InvalidArgument(msg) => CliError::Config(format!("{context}: {msg}")),
            other => CliError::Numerical(format!("{context}: {other}")),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
