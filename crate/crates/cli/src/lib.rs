//! Command-line front end for the capacity-bound computations: argument
//! validation, CSV/JSON/SVG emission, and the self-test table.

pub mod commands;
pub mod config;
pub mod csv_out;
pub mod selftest;
pub mod svg;

use std::process::ExitCode;

use thiserror::Error;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    SelftestFailed = 1,
    BadInput = 2,
    SolverFailed = 3,
}

impl From<Exit> for ExitCode {
    fn from(e: Exit) -> Self {
        ExitCode::from(e as u8)
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    BadInput(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit(&self) -> Exit {
        match self {
            CliError::BadInput(_) | CliError::Io(_) => Exit::BadInput,
            CliError::Solver(_) => Exit::SolverFailed,
        }
    }
}

impl From<capbound::Error> for CliError {
    fn from(e: capbound::Error) -> Self {
        match e {
            capbound::Error::Solver { .. } => CliError::Solver(e.to_string()),
            other => CliError::BadInput(other.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
