//! Command-line front end for `symcamel`: matrix ingestion, analysis
//! reports and randomized verification campaigns.

#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod input;
pub mod report;

use thiserror::Error;

pub use args::{Cli, Command, OutputFormat};
pub use commands::{run, Outcome};

/// Process exit status contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Valid = 0,
    Invalid = 1,
    InputError = 2,
    Inconsistent = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),

    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error(transparent)]
    Core(#[from] symcamel::Error),
}

impl CliError {
    pub fn exit_status(&self) -> ExitStatus {
        use symcamel::Error as E;
        match self {
            CliError::Io(_) | CliError::Parse { .. } | CliError::Validation(_) => ExitStatus::InputError,
            CliError::Core(e) => match e {
                E::NotPositiveDefinite(_) => ExitStatus::Invalid,
                E::InvalidDimension(_)
                | E::InvalidIndex(_)
                | E::InvalidParameter(_)
                | E::NotSymmetric(_)
                | E::InvalidBasis(_)
                | E::DegeneratePairing(_)
                | E::CombinatorialBlowup { .. } => ExitStatus::InputError,
                E::NotSymplectic(_) | E::DegenerateSubspace(_) | E::ConvergenceFailure { .. } | E::Inconsistent(_) => {
                    ExitStatus::Inconsistent
                }
            },
        }
    }
}
