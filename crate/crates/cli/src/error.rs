use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("check failed: {0}")]
    Check(String),
    #[error(transparent)]
    Core(#[from] hakdyn::Error),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use hakdyn::Error as E;
        match self {
            CliError::Check(_) => 2,
            CliError::Core(E::EmptyBranch { .. } | E::Precondition(_)) => 2,
            CliError::Core(E::Capacity(_)) => 4,
            _ => 3,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}
