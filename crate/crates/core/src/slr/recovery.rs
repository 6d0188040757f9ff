//! Primal recovery: hard-balance re-solve with most binaries fixed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{Family, LinearModel, SolveStatus, SolverBackend, VarId};
use crate::plan::PlanningModel;

use super::SlrConfig;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Recovery {
    #[serde(skip)]
    pub values: Vec<f64>,
    pub objective: f64,
    pub status: SolveStatus,
    /// Binaries fixed in the successful round.
    pub fixed: usize,
    pub binaries: usize,
    /// Rounds needed (1 when the first fixing was feasible).
    pub rounds: usize,
}

/// The planning model with its balance residuals as equality rows.
pub fn hard_balance_model(plan: &PlanningModel) -> LinearModel {
    let mut m = plan.model.clone();
    if plan.mode == crate::plan::BalanceMode::Residual {
        for (i, r) in plan.balance_rows().enumerate() {
            m.add_eq(format!("balance[{i}]"), Family::Balance, r.expr.clone(), 0.0);
        }
    }
    m
}

/// Fixes the most stable `fix_fraction` of binaries at `incumbent` and
/// solves the hard-balance problem. On infeasibility the free share doubles
/// (most unstable binaries released first) for up to
/// `max_recovery_rounds` rounds, the last of which frees everything.
pub fn recover_primal(
    plan: &PlanningModel,
    backend: &dyn SolverBackend,
    incumbent: &[f64],
    instability: &[usize],
    config: &SlrConfig,
) -> Result<Recovery> {
    let base = hard_balance_model(plan);
    let binaries: Vec<VarId> = plan.model.binaries().collect();
    let nb = binaries.len();
    let mut order: Vec<usize> = (0..nb).collect();
    // stable first; ties keep column order
    order.sort_by_key(|&i| (instability.get(i).copied().unwrap_or(0), i));

    let mut free_share = (1.0 - config.fix_fraction).clamp(0.0, 1.0);
    let rounds = config.max_recovery_rounds.max(1);
    for round in 1..=rounds {
        let last = round == rounds;
        let fixed = if last { 0 } else { ((1.0 - free_share) * nb as f64).floor() as usize };
        let mut m = base.clone();
        for &i in &order[..fixed] {
            let v = binaries[i];
            m.fix(v, incumbent[v.index()].round());
        }
        let out = backend.solve(&m, &config.solver)?;
        log::debug!("recovery round {round}: {fixed}/{nb} binaries fixed, status {}", out.status);
        if out.status.has_solution() {
            return Ok(Recovery {
                values: out.values,
                objective: out.objective,
                status: out.status,
                fixed,
                binaries: nb,
                rounds: round,
            });
        }
        if last {
            return match out.status {
                SolveStatus::Infeasible => Err(Error::Infeasible { family: None }),
                other => Err(Error::NoSolution(format!("primal recovery ended with status {other}"))),
            };
        }
        free_share = (free_share.max(1.0 / nb.max(1) as f64) * 2.0).min(1.0);
    }
    unreachable!("recovery loop returns on its last round")
}
