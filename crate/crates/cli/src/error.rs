use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config(_) | CliError::Io { .. } => ExitCode::from(2),
            CliError::Numerical(_) => ExitCode::from(3),
        }
    }
}

impl From<infolab::Error> for CliError {
    fn from(e: infolab::Error) -> Self {
        use infolab::Error as E;
        match e {
            E::CrossCheck { .. }
            | E::NonFinite
            | E::NotHermitian { .. }
            | E::NotUnitary { .. }
            | E::InvalidState(_)
            | E::NotCommuting { .. } => CliError::Numerical(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

/// How a command finished when it produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    ToleranceBreach,
    NotConverged,
}

impl Status {
    pub fn exit_code(self) -> ExitCode {
        match self {
            Status::Ok => ExitCode::SUCCESS,
            Status::ToleranceBreach => ExitCode::from(4),
            Status::NotConverged => ExitCode::from(5),
        }
    }
}
