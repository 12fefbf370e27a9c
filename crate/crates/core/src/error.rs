use std::path::PathBuf;

use thiserror::Error;

use crate::ingest::JointId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the toolkit can report.
///
/// Variants carry owned strings rather than wrapped sources so that reports
/// can hold per-case failures by value.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("failed to read {path}: {message}")]
    Io { path: PathBuf, message: String },

    #[error("parse error in {location}: {message}")]
    Parse { location: String, message: String },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("missing data: joint {0} is not present")]
    MissingJoint(JointId),

    #[error("missing data: joint {0} has no sample above the confidence threshold")]
    AllOccluded(JointId),

    #[error("trajectory of {0} has unrepaired gaps")]
    UnrepairedGap(JointId),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("degenerate signal: {0}")]
    DegenerateSignal(String),

    #[error("no periodicity: {0}")]
    NoPeriodicity(String),

    #[error("ambiguous cycle: left estimate {left} and right estimate {right} differ by more than 25% of their mean")]
    AmbiguousCycle { left: usize, right: usize },

    #[error("insufficient record: cycle of {cycle} frames needs at least {needed} samples, got {available}")]
    InsufficientRecord {
        cycle: usize,
        needed: usize,
        available: usize,
    },

    #[error("degenerate system: {0}")]
    DegenerateSystem(String),
}

impl Error {
    /// Process exit status for the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. }
            | Error::Parse { .. }
            | Error::InsufficientData(_)
            | Error::MissingJoint(_)
            | Error::AllOccluded(_)
            | Error::UnrepairedGap(_) => 2,
            Error::InvalidSpectrum(_)
            | Error::DegenerateSignal(_)
            | Error::NoPeriodicity(_)
            | Error::AmbiguousCycle { .. }
            | Error::InsufficientRecord { .. }
            | Error::DegenerateSystem(_) => 3,
            Error::InvalidParameter(_) | Error::InvalidInput(_) => 4,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, err: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            message: err.to_string(),
        }
    }
}
