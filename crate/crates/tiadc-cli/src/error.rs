use thiserror::Error;

/// CLI failure modes, mapped onto exit codes in `main`.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, malformed files, out-of-domain parameters. Exit code 1.
    #[error("{0}")]
    Validation(String),

    /// A numerical routine failed to converge. Exit code 2.
    #[error("{0}")]
    NonConvergence(String),

    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NonConvergence(_) => 2,
            _ => 1,
        }
    }
}

impl From<tiadc::Error> for CliError {
    fn from(err: tiadc::Error) -> Self {
        match err {
            tiadc::Error::NonConvergence(msg) => CliError::NonConvergence(msg),
            other => CliError::Validation(other.to_string()),
        }
    }
}
