//! Cluster → build → solve → report pipeline.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error as ThisError;

use crate::error::{Error, Result};
use crate::ev::{bootstrap_fleet, cluster_vehicles, ChargingRegime, EvFleet};
use crate::lp::{backend_by_name, SolveOptions, SolverBackend};
use crate::model::{load_scenario, write_clusters, FleetSource, Scenario, SystemData};
use crate::plan::{build_plan, BalanceMode};
use crate::slr::{solve_monolithic, solve_slr, IterationRecord, SlrConfig};
use crate::solution::{PlanSolution, SolveMeta};

use super::report;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMode {
    Slr,
    Monolithic,
}

impl fmt::Display for SolveMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveMode::Slr => "slr",
            SolveMode::Monolithic => "monolithic",
        })
    }
}

impl FromStr for SolveMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "slr" => Ok(SolveMode::Slr),
            "monolithic" => Ok(SolveMode::Monolithic),
            other => Err(format!("unknown solve mode `{other}` (expected slr or monolithic)")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub scenario: PathBuf,
    pub regime: ChargingRegime,
    pub mode: SolveMode,
    pub seed: u64,
    /// Reports are written here when set.
    pub output: Option<PathBuf>,
    pub backend: String,
    pub solver: SolveOptions,
    pub slr: SlrConfig,
}

impl RunConfig {
    pub fn new(scenario: impl Into<PathBuf>, regime: ChargingRegime, mode: SolveMode) -> Self {
        RunConfig {
            scenario: scenario.into(),
            regime,
            mode,
            seed: 0,
            output: None,
            backend: "highs".into(),
            solver: SolveOptions::default(),
            slr: SlrConfig::default(),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Stage {
    Load,
    Cluster,
    Build,
    Solve,
    Report,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Load => "load",
            Stage::Cluster => "cluster",
            Stage::Build => "build",
            Stage::Solve => "solve",
            Stage::Report => "report",
        })
    }
}

#[derive(Debug, ThisError)]
#[error("[{stage}] {source}")]
pub struct RunError {
    pub stage: Stage,
    #[source]
    pub source: Error,
}

fn at(stage: Stage) -> impl FnOnce(Error) -> RunError {
    move |source| RunError { stage, source }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub system: SystemData,
    pub fleet: EvFleet,
    pub solution: PlanSolution,
    pub iterations: Vec<IterationRecord>,
}

/// Truck fleet of a scenario: shipped clusters, or bootstrapped and
/// clustered drive records.
pub fn prepare_fleet(scenario: &Scenario, seed: u64) -> Result<EvFleet> {
    let sys = &scenario.system;
    match &scenario.fleet {
        FleetSource::None => Ok(EvFleet::empty(scenario.ev_zone, &sys.grid.years)),
        FleetSource::Clusters(f) => Ok(f.clone()),
        FleetSource::Drives { records, projections } => {
            let boot = bootstrap_fleet(records, projections, &sys.ev, seed)?;
            Ok(cluster_vehicles(&boot.years, &sys.grid.years, scenario.ev_zone, &sys.ev)?)
        }
    }
}

/// Builds and solves one regime in memory.
pub fn solve_plan(
    sys: &SystemData,
    fleet: &EvFleet,
    regime: ChargingRegime,
    mode: SolveMode,
    backend: &dyn SolverBackend,
    solver: &SolveOptions,
    slr: &SlrConfig,
) -> Result<(PlanSolution, Vec<IterationRecord>)> {
    match mode {
        SolveMode::Monolithic => {
            let plan = build_plan(sys, fleet, regime, BalanceMode::Hard)?;
            let out = solve_monolithic(&plan, backend, solver)?;
            let meta = SolveMeta {
                method: mode.to_string(),
                status: out.status,
                objective: out.objective,
                dual_bound: out.dual_bound,
                seconds: out.seconds,
            };
            Ok((PlanSolution::from_values(sys, fleet, &plan, &out.values, meta), Vec::new()))
        }
        SolveMode::Slr => {
            let plan = build_plan(sys, fleet, regime, BalanceMode::Residual)?;
            let mut cfg = slr.clone();
            cfg.solver = solver.clone();
            let out = solve_slr(sys, &plan, backend, &cfg)?;
            let meta = SolveMeta {
                method: mode.to_string(),
                status: out.recovery.status,
                objective: out.objective,
                dual_bound: out.dual_bound,
                seconds: out.seconds,
            };
            Ok((PlanSolution::from_values(sys, fleet, &plan, &out.values, meta), out.iterations))
        }
    }
}

pub fn run(config: &RunConfig) -> std::result::Result<RunOutput, RunError> {
    let scenario = load_scenario(&config.scenario).map_err(|e| RunError {
        stage: Stage::Load,
        source: e.into(),
    })?;
    let fleet = prepare_fleet(&scenario, config.seed).map_err(at(Stage::Cluster))?;
    let backend = backend_by_name(&config.backend).map_err(|e| RunError {
        stage: Stage::Build,
        source: e.into(),
    })?;
    let mut solver = config.solver.clone();
    solver.seed = config.seed as u32;
    let sys = &scenario.system;
    // build failures surface from solve_plan before any solver call
    let (solution, iterations) = solve_plan(sys, &fleet, config.regime, config.mode, backend.as_ref(), &solver, &config.slr)
        .map_err(|e| {
            let stage = match e {
                Error::Invalid(_) | Error::Structure(_) | Error::Ev(_) | Error::Mismatch(_) => Stage::Build,
                _ => Stage::Solve,
            };
            RunError { stage, source: e }
        })?;
    if let Some(dir) = &config.output {
        report::write_solution(dir, &solution).map_err(at(Stage::Report))?;
        if !iterations.is_empty() {
            report::write_iterations(dir, &iterations).map_err(at(Stage::Report))?;
        }
        let zone = &sys.zones[fleet.zone].id;
        write_clusters(dir, &fleet, zone, None).map_err(|e| RunError {
            stage: Stage::Report,
            source: e.into(),
        })?;
    }
    Ok(RunOutput {
        system: scenario.system.clone(),
        fleet,
        solution,
        iterations,
    })
}
