use std::ffi::CString;
use std::time::Instant;

use highs::{HighsModelStatus, RowProblem, Sense};

use super::backend::{Capabilities, SolveOptions, SolveOutcome, SolveStatus, SolverBackend, SolverError};
use super::model::{LinearModel, VarKind};

/// HiGHS MILP/LP backend.
#[derive(Copy, Clone, Debug, Default)]
pub struct HighsBackend;

fn double_info(solved: &highs::SolvedModel, key: &str) -> Option<f64> {
    let name = CString::new(key).ok()?;
    let mut value = f64::NAN;
    let status =
        unsafe { highs_sys::Highs_getDoubleInfoValue(solved.as_ptr(), name.as_ptr(), &mut value) };
    (status == 0).then_some(value)
}

fn int_info(solved: &highs::SolvedModel, key: &str) -> Option<i64> {
    let name = CString::new(key).ok()?;
    let mut value: highs_sys::HighsInt = 0;
    let status =
        unsafe { highs_sys::Highs_getIntInfoValue(solved.as_ptr(), name.as_ptr(), &mut value) };
    (status == 0).then_some(value as i64)
}

impl SolverBackend for HighsBackend {
    fn name(&self) -> &str {
        "highs"
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            milp: true,
            lp: true,
        }
    }

    fn solve(
        &self,
        model: &LinearModel,
        options: &SolveOptions,
    ) -> Result<SolveOutcome, SolverError> {
        let start = Instant::now();
        let offset = model.objective().constant_part();
        if model.num_vars() == 0 {
            return Ok(SolveOutcome {
                status: SolveStatus::Optimal,
                values: Vec::new(),
                objective: offset,
                dual_bound: offset,
                gap: 0.0,
                seconds: 0.0,
            });
        }

        let mut cost = vec![0.0; model.num_vars()];
        for &(v, c) in model.objective().terms() {
            cost[v.index()] += c;
        }
        let mut problem = RowProblem::default();
        let mut cols = Vec::with_capacity(model.num_vars());
        let mut any_integer = false;
        for (var, &c) in model.vars().iter().zip(&cost) {
            let integer = var.kind == VarKind::Binary && !options.relax_integrality;
            any_integer |= integer;
            cols.push(problem.add_column_with_integrality(c, var.lower..=var.upper, integer));
        }
        for row in model.constraints() {
            let factors: Vec<_> = row
                .expr
                .terms()
                .iter()
                .map(|&(v, c)| (cols[v.index()], c))
                .collect();
            match (row.lower.is_finite(), row.upper.is_finite()) {
                (true, true) => problem.add_row(row.lower..=row.upper, factors),
                (true, false) => problem.add_row(row.lower.., factors),
                (false, true) => problem.add_row(..=row.upper, factors),
                (false, false) => continue,
            }
        }

        let mut m = problem
            .try_optimise(Sense::Minimise)
            .map_err(|e| SolverError::Model {
                backend: self.name().into(),
                message: format!("{e:?}"),
            })?;
        m.make_quiet();
        m.set_option("threads", options.threads.max(1) as i32);
        m.set_option("random_seed", options.seed as i32);
        m.set_option("mip_rel_gap", options.mip_gap);
        m.set_option("mip_abs_gap", 1e-9);
        if let Some(limit) = options.time_limit {
            m.set_option("time_limit", limit);
        }
        let solved = m.try_solve().map_err(|e| SolverError::Model {
            backend: self.name().into(),
            message: format!("{e:?}"),
        })?;

        let status = solved.status();
        let has_point = int_info(&solved, "primal_solution_status").unwrap_or(0) == 2;
        let mapped = match status {
            HighsModelStatus::Optimal => SolveStatus::Optimal,
            HighsModelStatus::Infeasible | HighsModelStatus::UnboundedOrInfeasible => {
                SolveStatus::Infeasible
            }
            HighsModelStatus::ModelEmpty => SolveStatus::Optimal,
            _ if has_point => SolveStatus::FeasibleGap,
            HighsModelStatus::ReachedTimeLimit | HighsModelStatus::ReachedIterationLimit => {
                SolveStatus::Timeout
            }
            other => {
                return Err(SolverError::Model {
                    backend: self.name().into(),
                    message: format!("unexpected model status {other:?}"),
                })
            }
        };
        let seconds = start.elapsed().as_secs_f64();
        if !mapped.has_solution() {
            return Ok(SolveOutcome {
                status: mapped,
                values: Vec::new(),
                objective: f64::INFINITY,
                dual_bound: f64::NEG_INFINITY,
                gap: f64::INFINITY,
                seconds,
            });
        }
        let values = solved.get_solution().columns().to_vec();
        let objective = solved.objective_value() + offset;
        let (dual_bound, gap) = if any_integer {
            let bound = double_info(&solved, "mip_dual_bound").unwrap_or(f64::NEG_INFINITY) + offset;
            (bound, solved.mip_gap())
        } else {
            (objective, 0.0)
        };
        Ok(SolveOutcome {
            status: mapped,
            values,
            objective,
            dual_bound,
            gap,
            seconds,
        })
    }
}
