use std::path::PathBuf;

use thiserror::Error;

use crate::ev::EvError;
use crate::lp::{Family, SolverError};

/// Problem reading a scenario directory, located by file and data row.
#[derive(Debug, Error)]
#[error("{}{}: {message}", file.display(), row.map(|r| format!(" row {r}")).unwrap_or_default())]
pub struct ScenarioError {
    pub file: PathBuf,
    /// 1-based data row (the header is row 0).
    pub row: Option<u64>,
    pub message: String,
}

impl ScenarioError {
    pub fn new(file: impl Into<PathBuf>, row: Option<u64>, message: impl Into<String>) -> Self {
        ScenarioError {
            file: file.into(),
            row,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("invalid system:\n  {}", .0.join("\n  "))]
    Invalid(Vec<String>),
    #[error(transparent)]
    Ev(#[from] EvError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("model structure: {0}")]
    Structure(String),
    #[error("problem is infeasible{}", .family.map(|f| format!("; first conflicting constraint family: {f}")).unwrap_or_default())]
    Infeasible { family: Option<Family> },
    #[error("solver stopped without a feasible point ({0})")]
    NoSolution(String),
    #[error("{0}")]
    Mismatch(String),
    #[error("non-finite residual at iteration {0}")]
    NonFinite(usize),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
