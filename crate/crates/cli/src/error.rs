use thiserror::Error;

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NO_HYPOTHESIS: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed file or flag value.
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] relpose::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use relpose::Error as E;
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Core(E::NoValidHypothesis) => EXIT_NO_HYPOTHESIS,
            CliError::Core(
                E::InvalidConfig(_) | E::TooFewCorrespondences { .. } | E::MissingInput(_) | E::Json(_),
            ) => EXIT_INPUT,
            _ => EXIT_FAILURE,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
