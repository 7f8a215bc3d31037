use std::fmt;

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Malformed input or configuration (exit 2).
    Parse(String),
    /// Moments outside the moment space (exit 3).
    Infeasible(String),
    /// A solver failed on valid input (exit 4).
    Numeric(String),
    /// Reading or writing files (exit 1).
    Io(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Infeasible(m) => write!(f, "infeasible: {m}"),
            CliError::Numeric(m) => write!(f, "numeric error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<dmed_core::Error> for CliError {
    fn from(e: dmed_core::Error) -> Self {
        use dmed_core::Error as E;
        match e {
            E::InfeasibleMoments(_) => CliError::Infeasible(e.to_string()),
            E::Numeric(_) => CliError::Numeric(e.to_string()),
            _ => CliError::Parse(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
