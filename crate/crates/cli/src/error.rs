use thiserror::Error;

/// Command failure, classified by process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    pub(crate) fn io(context: impl std::fmt::Display, err: std::io::Error) -> Self {
        CliError::Io(format!("{context}: {err}"))
    }
}

impl From<gta_core::Error> for CliError {
    fn from(err: gta_core::Error) -> Self {
        CliError::Data(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
