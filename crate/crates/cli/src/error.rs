use thiserror::Error;

/// Everything that can end a run early, with its exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Library(#[from] qortho::Error),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    /// 2 for anything wrong with the inputs, 3 for numeric-domain failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Library(qortho::Error::Domain(_)) => 3,
            _ => 2,
        }
    }
}
