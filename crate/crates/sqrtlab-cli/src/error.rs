//! Process-level error classification.
//!
//! Exit codes: 0 ok, 1 hard-assert (certificate) violation, 2 config
//! error, 3 cap exceeded. I/O problems are reported as config errors.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    Certificate(String),
    Config(String),
    Cap(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Certificate(_) => 1,
            CliError::Config(_) => 2,
            CliError::Cap(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Certificate(msg) => write!(f, "certificate violation: {msg}"),
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Cap(msg) => write!(f, "cap exceeded: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("i/o: {e}"))
    }
}
