//! CLI failures mapped onto the documented process exit codes.

use std::fmt;

/// Exit codes: 0 success, 1 usage, 2 I/O, 3 validation failure,
/// 4 numerical non-convergence.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Validation(String),
    NonConvergent(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Validation(_) => 3,
            CliError::NonConvergent(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
            CliError::Validation(msg) => write!(f, "validation failed: {msg}"),
            CliError::NonConvergent(msg) => write!(f, "did not converge: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<noonlith::Error> for CliError {
    fn from(err: noonlith::Error) -> Self {
        match err {
            noonlith::Error::NonConvergent { .. } => CliError::NonConvergent(err.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_are_stable() {
        assert_eq!(CliError::Usage(String::new()).exit_code(), 1);
        assert_eq!(CliError::Io(String::new()).exit_code(), 2);
        assert_eq!(CliError::Validation(String::new()).exit_code(), 3);
        assert_eq!(CliError::NonConvergent(String::new()).exit_code(), 4);
    }

    #[test]
    fn library_errors_map_to_the_right_codes() {
        let nc = CliError::from(noonlith::Error::NonConvergent {
            estimate: 1.0,
            tolerance: 0.1,
        });
        assert_eq!(nc.exit_code(), 4);
        let usage = CliError::from(noonlith::Error::InvalidInput("x".into()));
        assert_eq!(usage.exit_code(), 1);
    }
}
