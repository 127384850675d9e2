//! Process exit-code policy: 2 for schema/input violations, 3 for metric
//! preconditions, 1 for everything else.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Malformed or contract-violating input files and flags.
    Schema(anyhow::Error),
    /// Structurally valid input on which the requested metric is
    /// undefined.
    Metric(anyhow::Error),
    /// I/O and other environment failures.
    Other(anyhow::Error),
}

impl CliError {
    pub fn schema(err: impl Into<anyhow::Error>) -> Self {
        Self::Schema(err.into())
    }

    pub fn metric(err: impl Into<anyhow::Error>) -> Self {
        Self::Metric(err.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Schema(_) => 2,
            Self::Metric(_) => 3,
            Self::Other(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Schema(e) | Self::Metric(e) | Self::Other(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(err: anyhow::Error) -> Self {
        Self::Other(err)
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        Self::Other(err.into())
    }
}

pub type CliResult<T> = Result<T, CliError>;
