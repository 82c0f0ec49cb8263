use std::fmt;

use topowire::WireError;

#[derive(Debug)]
pub enum CliError {
    /// Malformed or inconsistent configuration.
    Config(String),
    Wire(WireError),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Wire(e) if e.is_numerical_guard() => 3,
            CliError::Wire(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "invalid config: {m}"),
            CliError::Wire(e) if e.is_numerical_guard() => write!(f, "numerical guard: {e}"),
            CliError::Wire(e) => write!(f, "invalid config: {e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<WireError> for CliError {
    fn from(e: WireError) -> Self {
        CliError::Wire(e)
    }
}
