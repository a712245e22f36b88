use std::io;

/// Process exit statuses of the `ivrand` binary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    /// Inputs failed to parse or validate.
    Input = 2,
    /// A semantic check on the result failed.
    Verification = 3,
    /// A configured resource cap or horizon was hit.
    Resource = 4,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },
    #[error("{0}")]
    Input(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Core(#[from] ivrand_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        use ivrand_core::Error as E;
        match self {
            CliError::Parse { .. } | CliError::Input(_) | CliError::Io { .. } => ExitCode::Input,
            CliError::Verification(_) => ExitCode::Verification,
            CliError::Core(E::Contract(_)) => ExitCode::Verification,
            CliError::Core(E::Resource(_) | E::Horizon(_)) => ExitCode::Resource,
            CliError::Core(E::Domain(_) | E::Config(_)) => ExitCode::Input,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
