//! Surrogate Lagrangian relaxation of the zonal balance, primal recovery and
//! the monolithic reference solve.
//!
//! Sign convention: a balance residual `r` is supply minus demand (MW) and
//! multipliers `Λ` are in $/MWh. The relaxed objective of a plan `x` is
//!
//! `L(x) = 𝕆(x) − Σ_i Λ_i W_i r_i(x) + ρ Σ_i W_i |r_i(x)|`
//!
//! where `W_i = ω_y ω_w` scales an hourly residual to the horizon. Feasible
//! plans have `L = 𝕆`, so `min_x L` is a lower bound on the optimum for any
//! `Λ` and `ρ ≥ 0`. Multipliers move as `Λ ← Λ − s·R`.

pub mod monolithic;
pub mod multiplier;
pub mod recovery;

use std::collections::VecDeque;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{BlockId, Family, LinExpr, LinearModel, SolveOptions, SolveStatus, SolverBackend, VarId};
use crate::model::SystemData;
use crate::plan::{BalanceMode, PlanningModel};

pub use monolithic::{probe_infeasibility, solve_monolithic};
pub use multiplier::{l2_norm, max_abs, update_multipliers, StepRule};
pub use recovery::{recover_primal, Recovery};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlrConfig {
    pub step: StepRule,
    /// Initial weight of the absolute-residual penalty ($/MWh).
    pub rho0: f64,
    /// Factor applied to `ρ` when the best residual stalls.
    pub rho_growth: f64,
    pub rho_max: f64,
    /// Iterations without a 1% improvement of the best residual before `ρ` grows.
    pub patience: usize,
    pub max_iterations: usize,
    /// Convergence when every hourly residual is within this fraction of its zone's peak load.
    pub tolerance: f64,
    /// A full relaxed solve (and a dual bound) every this many iterations; 0 disables.
    pub full_solve_every: usize,
    /// Binary stability window for primal recovery.
    pub stability_window: usize,
    /// Share of binaries fixed during primal recovery.
    pub fix_fraction: f64,
    pub max_recovery_rounds: usize,
    pub solver: SolveOptions,
    /// Warm-start multipliers, one per balance row.
    pub initial_multipliers: Option<Vec<f64>>,
}

impl Default for SlrConfig {
    fn default() -> Self {
        SlrConfig {
            step: StepRule::default(),
            rho0: 1.0,
            rho_growth: 1.5,
            rho_max: 1e4,
            patience: 3,
            max_iterations: 500,
            tolerance: 1e-3,
            full_solve_every: 25,
            stability_window: 10,
            fix_fraction: 0.95,
            max_recovery_rounds: 6,
            solver: SolveOptions::default(),
            initial_multipliers: None,
        }
    }
}

/// One line of the iterate log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub k: usize,
    /// Relaxed objective of the incumbent at the multipliers used in this iteration.
    pub dual_value: f64,
    /// Best proven lower bound on the optimum so far.
    pub dual_bound: f64,
    pub max_residual: f64,
    pub l2_residual: f64,
    /// Scalar `s` of the multiplier update.
    pub step: f64,
    pub rho: f64,
    /// Dispatch blocks re-solved (investment is always included).
    pub subset: String,
    pub accepted: bool,
    pub degraded: bool,
    pub seconds: f64,
}

struct RowInfo {
    weight: f64,
    pos: VarId,
    neg: VarId,
    threshold: f64,
}

/// Dual iteration state over a residual-mode planning model.
pub struct SlrState<'a> {
    plan: &'a PlanningModel,
    backend: &'a dyn SolverBackend,
    config: SlrConfig,
    work: LinearModel,
    rows: Vec<RowInfo>,
    num_blocks: usize,
    pub lambda: Vec<f64>,
    pub rho: f64,
    /// Incumbent over the working columns (plan columns first).
    pub x: Vec<f64>,
    pub k: usize,
    pub log: Vec<IterationRecord>,
    pub best_max_residual: f64,
    pub best_dual_bound: f64,
    stall: usize,
    window: VecDeque<Vec<bool>>,
    cursor: usize,
    started: Instant,
}

impl<'a> SlrState<'a> {
    /// Prepares the penalty split and computes the initial incumbent by a
    /// full relaxed solve at the initial multipliers.
    pub fn new(sys: &SystemData, plan: &'a PlanningModel, backend: &'a dyn SolverBackend, config: SlrConfig) -> Result<Self> {
        if plan.mode != BalanceMode::Residual {
            return Err(Error::Mismatch("relaxation needs a residual-mode planning model".into()));
        }
        let g = &sys.grid;
        let peaks: Vec<f64> = sys.zones.iter().map(|z| z.peak_load()).collect();
        let mut work = plan.model.clone();
        let mut rows = Vec::with_capacity(plan.num_balance_rows());
        for (i, r) in plan.balance_rows().enumerate() {
            let pos = work.add_continuous(format!("res_pos[{i}]"), 0.0, f64::INFINITY, r.block);
            let neg = work.add_continuous(format!("res_neg[{i}]"), 0.0, f64::INFINITY, r.block);
            let mut e = r.expr.clone();
            e.add_term(pos, -1.0).add_term(neg, 1.0);
            work.add_eq(format!("res_split[{i}]"), Family::Penalty, e, 0.0);
            rows.push(RowInfo {
                weight: g.year_weights[r.key.year] * g.periods[r.key.period].weight,
                pos,
                neg,
                threshold: config.tolerance * peaks[r.zone].max(1e-9),
            });
        }
        let lambda = match &config.initial_multipliers {
            Some(l) if l.len() == rows.len() => l.clone(),
            Some(l) => {
                return Err(Error::Mismatch(format!(
                    "warm start has {} multipliers for {} balance rows",
                    l.len(),
                    rows.len()
                )))
            }
            None => vec![0.0; rows.len()],
        };
        let mut state = SlrState {
            plan,
            backend,
            rho: config.rho0,
            config,
            work,
            rows,
            num_blocks: g.num_blocks(),
            lambda,
            x: Vec::new(),
            k: 0,
            log: Vec::new(),
            best_max_residual: f64::INFINITY,
            best_dual_bound: f64::NEG_INFINITY,
            stall: 0,
            window: VecDeque::new(),
            cursor: 0,
            started: Instant::now(),
        };
        let all: Vec<usize> = (0..state.num_blocks).collect();
        let (values, bound) = state.solve_subset(&all)?;
        state.x = values.ok_or_else(|| Error::NoSolution("initial relaxed solve".into()))?;
        state.best_dual_bound = bound;
        state.sync_penalty();
        let r = state.residuals();
        state.best_max_residual = max_abs(&r);
        state.push_window();
        Ok(state)
    }

    pub fn plan(&self) -> &PlanningModel {
        self.plan
    }

    /// Balance residuals of the incumbent.
    pub fn residuals(&self) -> Vec<f64> {
        self.plan.residuals(&self.x)
    }

    /// True when every residual is inside its zone tolerance.
    pub fn converged(&self) -> bool {
        self.plan
            .balance_rows()
            .zip(&self.rows)
            .all(|(r, info)| r.expr.eval(&self.x).abs() <= info.threshold)
    }

    /// `L(x)` at the current multipliers and penalty.
    pub fn lagrangian(&self, x: &[f64]) -> f64 {
        let mut value = self.plan.objective.eval(x);
        for ((row, info), &l) in self.plan.balance_rows().zip(&self.rows).zip(&self.lambda) {
            let r = row.expr.eval(x);
            value += info.weight * (self.rho * r.abs() - l * r);
        }
        value
    }

    fn objective(&self) -> LinExpr {
        let mut obj = self.plan.objective.clone();
        for (info, &l) in self.rows.iter().zip(&self.lambda) {
            obj.add_term(info.pos, info.weight * (self.rho - l));
            obj.add_term(info.neg, info.weight * (self.rho + l));
        }
        obj
    }

    /// Solves the relaxed problem over investment plus `blocks` (dispatch
    /// block indices), others fixed at the incumbent. Returns the new
    /// assignment (None on timeout) and, for full solves, the backend's lower bound.
    fn solve_subset(&self, blocks: &[usize]) -> Result<(Option<Vec<f64>>, f64)> {
        let mut model = self.work.clone();
        model.set_objective(self.objective());
        let full = blocks.len() == self.num_blocks;
        if full {
            let out = self.backend.solve(&model, &self.config.solver)?;
            return match out.status {
                s if s.has_solution() => Ok((Some(out.values), out.dual_bound)),
                SolveStatus::Infeasible => Err(probe_infeasibility(self.backend, &model, &self.config.solver)?),
                _ => Ok((None, f64::NEG_INFINITY)),
            };
        }
        let x = &self.x;
        let free: Vec<bool> = model
            .vars()
            .iter()
            .map(|v| v.block == BlockId::INVESTMENT || blocks.contains(&(v.block.index() - 1)))
            .collect();
        let sub = model.restrict(&free, x);
        let out = self.backend.solve(&sub.model, &self.config.solver)?;
        match out.status {
            s if s.has_solution() => {
                let mut values = x.to_vec();
                sub.scatter(&out.values, &mut values);
                Ok((Some(values), f64::NEG_INFINITY))
            }
            SolveStatus::Infeasible => Err(Error::Structure(
                "partial relaxed solve infeasible around a feasible incumbent".into(),
            )),
            _ => Ok((None, f64::NEG_INFINITY)),
        }
    }

    /// Sets the penalty split columns to the exact positive/negative parts.
    fn sync_penalty(&mut self) {
        let r = self.plan.residuals(&self.x);
        for (info, ri) in self.rows.iter().zip(r) {
            self.x[info.pos.index()] = ri.max(0.0);
            self.x[info.neg.index()] = (-ri).max(0.0);
        }
    }

    fn push_window(&mut self) {
        let bits: Vec<bool> = self.plan.model.binaries().map(|v| self.x[v.index()] > 0.5).collect();
        self.window.push_back(bits);
        while self.window.len() > self.config.stability_window.max(1) {
            self.window.pop_front();
        }
    }

    /// Number of value changes of each plan binary over the stability window.
    pub fn instability(&self) -> Vec<usize> {
        let nb = self.plan.model.num_binaries();
        let mut changes = vec![0usize; nb];
        for pair in self.window.iter().collect::<Vec<_>>().windows(2) {
            for (i, c) in changes.iter_mut().enumerate() {
                if pair[0][i] != pair[1][i] {
                    *c += 1;
                }
            }
        }
        changes
    }

    /// One surrogate iteration; returns its log record.
    pub fn iterate(&mut self) -> Result<IterationRecord> {
        let started = Instant::now();
        let k = self.k;
        let full_now = self.config.full_solve_every > 0 && k > 0 && k % self.config.full_solve_every == 0;
        let before = self.lagrangian(&self.x);
        let mut subset: Vec<usize> = if full_now || self.num_blocks == 1 {
            (0..self.num_blocks).collect()
        } else {
            vec![self.cursor % self.num_blocks]
        };
        self.cursor += 1;
        let mut accepted = false;
        let mut degraded = false;
        let mut after = before;
        loop {
            let all = subset.len() == self.num_blocks;
            let (values, bound) = self.solve_subset(&subset)?;
            if all && bound.is_finite() {
                self.best_dual_bound = self.best_dual_bound.max(bound);
            }
            match values {
                None => {
                    degraded = true;
                    break;
                }
                Some(v) => {
                    let value = self.lagrangian(&v);
                    let tol = 1e-9 * before.abs().max(1.0);
                    if value < before - tol {
                        self.x = v;
                        after = value;
                        accepted = true;
                        break;
                    }
                    if all {
                        // incumbent already minimises the relaxation at these multipliers
                        if value <= before + tol {
                            self.x = v;
                            after = value;
                        }
                        break;
                    }
                    let next = (subset.last().unwrap() + 1) % self.num_blocks;
                    subset.push(next);
                }
            }
        }
        self.sync_penalty();
        let r = self.residuals();
        let max_r = max_abs(&r);
        let l2 = l2_norm(&r);
        if max_r < 0.99 * self.best_max_residual {
            self.best_max_residual = max_r;
            self.stall = 0;
        } else {
            self.best_max_residual = self.best_max_residual.min(max_r);
            self.stall += 1;
        }
        let step = if self.converged() {
            0.0
        } else {
            let len = self.config.step.length(k);
            update_multipliers(&mut self.lambda, &r, len, k)?
        };
        if self.stall >= self.config.patience {
            self.rho = (self.rho.max(1e-3) * self.config.rho_growth).min(self.config.rho_max);
            self.stall = 0;
        }
        self.push_window();
        let record = IterationRecord {
            k,
            dual_value: after,
            dual_bound: self.best_dual_bound,
            max_residual: max_r,
            l2_residual: l2,
            step,
            rho: self.rho,
            subset: subset.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" "),
            accepted,
            degraded,
            seconds: started.elapsed().as_secs_f64(),
        };
        self.log.push(record.clone());
        self.k += 1;
        Ok(record)
    }

    pub fn elapsed(&self) -> f64 {
        self.started.elapsed().as_secs_f64()
    }

    /// Plan columns of the incumbent (penalty columns dropped).
    pub fn plan_values(&self) -> Vec<f64> {
        self.x[..self.plan.model.num_vars()].to_vec()
    }
}

/// Result of a relaxation run followed by primal recovery.
#[derive(Clone, Debug)]
pub struct SlrOutcome {
    pub values: Vec<f64>,
    pub objective: f64,
    pub dual_bound: f64,
    pub converged: bool,
    pub iterations: Vec<IterationRecord>,
    pub multipliers: Vec<f64>,
    pub recovery: Recovery,
    pub seconds: f64,
}

/// Runs dual iterations until convergence or the iteration limit, then
/// recovers a primal plan.
pub fn solve_slr(sys: &SystemData, plan: &PlanningModel, backend: &dyn SolverBackend, config: &SlrConfig) -> Result<SlrOutcome> {
    let start = Instant::now();
    let mut state = SlrState::new(sys, plan, backend, config.clone())?;
    let mut converged = state.converged();
    while !converged && state.k < config.max_iterations {
        let rec = state.iterate()?;
        log::debug!(
            "slr k={} L={:.6e} max|r|={:.4} step={:.4e} rho={:.2}",
            rec.k,
            rec.dual_value,
            rec.max_residual,
            rec.step,
            rec.rho
        );
        converged = state.converged();
    }
    if !converged {
        log::warn!(
            "relaxation stopped after {} iterations with max residual {:.4} MW",
            state.k,
            state.best_max_residual
        );
    }
    let instability = state.instability();
    let incumbent = state.plan_values();
    let recovery = recover_primal(plan, backend, &incumbent, &instability, config)?;
    let dual_bound = state.best_dual_bound.min(recovery.objective);
    Ok(SlrOutcome {
        objective: recovery.objective,
        values: recovery.values.clone(),
        dual_bound,
        converged,
        iterations: state.log.clone(),
        multipliers: state.lambda.clone(),
        recovery,
        seconds: start.elapsed().as_secs_f64(),
    })
}
