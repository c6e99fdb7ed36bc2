//! `qcx`: scenario-driven front end for `qcx-core`.

pub mod commands;
pub mod output;
pub mod scenario;

use qcx_core::QcError;
use thiserror::Error;

pub use commands::{run, Command, Outcome, RunOptions};
pub use scenario::Scenario;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] QcError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for bad input or unmet preconditions, 1 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Core(QcError::Precondition(_) | QcError::InvalidParameter { .. }) => 2,
            CliError::Core(_) => 1,
        }
    }
}
