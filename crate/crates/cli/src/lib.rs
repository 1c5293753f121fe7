//! Library behind the `subriem` binary: config parsing, check dispatch and
//! output writers.

pub mod checks;
pub mod config;
pub mod output;
pub mod runner;

use thiserror::Error;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DIVERGENCE: i32 = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("integration diverged after t = {0}")]
    Divergence(f64),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => EXIT_INPUT,
            CliError::Divergence(_) => EXIT_DIVERGENCE,
        }
    }
}

impl From<subriem::Error> for CliError {
    fn from(e: subriem::Error) -> Self {
        match e {
            subriem::Error::Divergence { last_good_time } => CliError::Divergence(last_good_time),
            other => CliError::Input(other.to_string()),
        }
    }
}
