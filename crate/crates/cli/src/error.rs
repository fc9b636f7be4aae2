use thiserror::Error;

/// Failures surfaced by the command-line tool, each with a fixed exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Identification(String),
    #[error("{0}")]
    Unviable(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Parse(_) => 2,
            CliError::Identification(_) => 3,
            CliError::Unviable(_) => 4,
            CliError::Io(_) | CliError::Numerical(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Parse(_) => "parse",
            CliError::Identification(_) => "identification_failure",
            CliError::Unviable(_) => "unviable_input",
            CliError::Io(_) => "io",
            CliError::Numerical(_) => "numerical",
        }
    }

    /// The single line printed on stderr.
    pub fn line(&self) -> String {
        let msg = self.to_string().replace('\n', " ");
        format!("error code={} kind={}: {msg}", self.exit_code(), self.kind())
    }
}

impl From<cdmid::Error> for CliError {
    fn from(e: cdmid::Error) -> Self {
        use cdmid::Error as E;
        let msg = e.to_string();
        match e {
            E::Configuration(_) => CliError::Config(msg),
            E::Parse { .. } => CliError::Parse(msg),
            E::IdentificationFailure(_) => CliError::Identification(msg),
            E::Unviable { .. } => CliError::Unviable(msg),
            E::InvalidArgument(_) | E::DimensionMismatch { .. } => CliError::Config(msg),
            E::RankDeficient { .. } | E::Singular { .. } => CliError::Numerical(msg),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
