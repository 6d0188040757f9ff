//! Direct solve of the full hard-balance problem.

use crate::error::{Error, Result};
use crate::lp::{Family, LinearModel, SolveOptions, SolveOutcome, SolveStatus, SolverBackend};
use crate::plan::{BalanceMode, PlanningModel};

/// Solves a hard-balance planning model. An infeasible model is probed for
/// the constraint family responsible.
pub fn solve_monolithic(plan: &PlanningModel, backend: &dyn SolverBackend, options: &SolveOptions) -> Result<SolveOutcome> {
    let model = match plan.mode {
        BalanceMode::Hard => std::borrow::Cow::Borrowed(&plan.model),
        BalanceMode::Residual => std::borrow::Cow::Owned(super::recovery::hard_balance_model(plan)),
    };
    let out = backend.solve(&model, options)?;
    match out.status {
        s if s.has_solution() => Ok(out),
        SolveStatus::Infeasible => Err(probe_infeasibility(backend, &model, options)?),
        other => Err(Error::NoSolution(format!("monolithic solve ended with status {other}"))),
    }
}

/// Drops one constraint family at a time, in declaration order, and names
/// the first whose removal makes the model feasible.
pub fn probe_infeasibility(backend: &dyn SolverBackend, model: &LinearModel, options: &SolveOptions) -> Result<Error> {
    let present: Vec<Family> = Family::ALL
        .into_iter()
        .filter(|f| model.constraints().iter().any(|c| c.family == *f))
        .collect();
    for family in present {
        let relaxed = model.without_families(&[family]);
        let out = backend.solve(&relaxed, options)?;
        if out.status.has_solution() {
            return Ok(Error::Infeasible { family: Some(family) });
        }
    }
    Ok(Error::Infeasible { family: None })
}
