use std::path::PathBuf;

use lts_core::LtsError;
use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const OTHER: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const CAP_EXCEEDED: i32 = 3;
    pub const NO_CANDIDATE: i32 = 4;
    pub const DEGENERATE_TIE: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("no rows")]
    NoRows,
    #[error("row {row}, column {col}: '{value}' is not a finite number")]
    NotNumeric { row: usize, col: usize, value: String },
    #[error("row {row} has {found} fields, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("malformed csv: {0}")]
    Csv(String),
    #[error("no column named '{0}' (the input has no header or a different one)")]
    UnknownColumn(String),
    #[error("column {ordinal} out of range (1..={cols})")]
    ColumnOutOfRange { ordinal: usize, cols: usize },
    #[error("{0}")]
    BadArgument(String),
    #[error(transparent)]
    Solver(#[from] LtsError),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solver(e) => match e {
                LtsError::InvalidInput(_) => exit::INPUT,
                LtsError::CapExceeded { .. } => exit::CAP_EXCEEDED,
                LtsError::NoCandidate { .. } | LtsError::NoRegularSubset => exit::NO_CANDIDATE,
                LtsError::DegenerateTie { .. } => exit::DEGENERATE_TIE,
                _ => exit::OTHER,
            },
            CliError::Output(_) => exit::OTHER,
            _ => exit::INPUT,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
