//! CLI-level error type. Every variant is an *input* problem (exit code 1);
//! hypothesis violations are not errors — they are reported outcomes.

use std::fmt;

/// An input error: malformed file, bad flag value, wrong kind, exceeded cap.
#[derive(Debug)]
pub struct CliError {
    message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError { message: message.into() }
    }

    /// Prefix the message with the file it came from.
    pub fn in_file(self, path: &str) -> Self {
        CliError { message: format!("{path}: {}", self.message) }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}

impl From<convexkit::error::Error> for CliError {
    fn from(e: convexkit::error::Error) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input(e.to_string())
    }
}
