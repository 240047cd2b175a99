//! Command-line front end for `otto-core`: configuration, parallel sweeps,
//! witness scans and CSV output.

pub mod commands;
pub mod config;
pub mod output;

pub use config::Config;

/// Version string recorded in every CSV header.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] otto_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Numerical(_) => 2,
            _ => 1,
        }
    }
}

/// How a command that ran to completion ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    IdentityBreach,
    NotRefrigerator,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::IdentityBreach => 3,
            Status::NotRefrigerator => 4,
        }
    }

    /// The more severe of two outcomes.
    pub fn worst(self, other: Status) -> Status {
        if self.exit_code() == 3 || other.exit_code() == 3 {
            Status::IdentityBreach
        } else if self == Status::NotRefrigerator || other == Status::NotRefrigerator {
            Status::NotRefrigerator
        } else {
            Status::Success
        }
    }
}
