//! Solver backend contract.
//!
//! A backend receives a complete [`LinearModel`] (columns with bounds and
//! integrality, linear rows, objective with constant offset), solves it as a
//! minimisation, and reports a status together with column values. Fixings
//! are expressed by tightening column bounds on a copy of the model before the
//! call, so a backend never keeps state between solves and a handle is never
//! shared between concurrent solves.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::model::LinearModel;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Capabilities {
    pub milp: bool,
    pub lp: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Relative MIP gap at which the search stops.
    pub mip_gap: f64,
    /// Wall-clock limit in seconds.
    pub time_limit: Option<f64>,
    pub threads: usize,
    pub seed: u32,
    /// Solve the LP relaxation instead of the MILP.
    pub relax_integrality: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            mip_gap: 1e-4,
            time_limit: None,
            threads: 1,
            seed: 0,
            relax_integrality: false,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Optimal,
    /// A feasible point was returned but the gap target was not reached.
    FeasibleGap,
    Infeasible,
    /// Limit reached without any feasible point.
    Timeout,
}

impl SolveStatus {
    pub fn has_solution(self) -> bool {
        matches!(self, SolveStatus::Optimal | SolveStatus::FeasibleGap)
    }
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::FeasibleGap => "feasible-gap",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Timeout => "timeout",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    /// Column values, empty unless `status.has_solution()`.
    pub values: Vec<f64>,
    /// Objective including the model's constant offset.
    pub objective: f64,
    /// Best proven lower bound (equal to `objective` for LPs).
    pub dual_bound: f64,
    pub gap: f64,
    pub seconds: f64,
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("backend `{backend}` rejected the model: {message}")]
    Model { backend: String, message: String },
    #[error("backend `{0}` does not support integer variables")]
    Unsupported(String),
    #[error("unknown solver backend `{0}`")]
    UnknownBackend(String),
}

pub trait SolverBackend: Send + Sync {
    fn name(&self) -> &str;
    fn capabilities(&self) -> Capabilities;
    fn solve(&self, model: &LinearModel, options: &SolveOptions)
        -> Result<SolveOutcome, SolverError>;
}

/// Looks up a backend by name (`highs` is the only one compiled in).
pub fn backend_by_name(name: &str) -> Result<Box<dyn SolverBackend>, SolverError> {
    match name.to_ascii_lowercase().as_str() {
        "highs" | "" => Ok(Box::new(super::highs::HighsBackend)),
        other => Err(SolverError::UnknownBackend(other.to_string())),
    }
}
