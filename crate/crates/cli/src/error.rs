use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad document, flag or matrix. Exit code 2.
    #[error("{0}")]
    Input(String),

    /// One or more invariants failed. Exit code 1.
    #[error("verification failed: {0} invariant(s) out of tolerance")]
    Verification(usize),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn input(field: &str, message: impl std::fmt::Display) -> Self {
        CliError::Input(format!("{field}: {message}"))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Input(_) | CliError::Io(_) => 2,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(format!("invalid experiment document: {e}"))
    }
}
