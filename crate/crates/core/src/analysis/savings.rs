//! Per-vehicle savings of a charging regime against a baseline.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solution::PlanSolution;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct YearSaving {
    pub year: u32,
    pub baseline_cost: f64,
    pub alternative_cost: f64,
    pub saving: f64,
    pub vehicles: u64,
    /// Undiscounted $ per vehicle-year (0 without vehicles).
    pub per_vehicle: f64,
}

/// Table-style totals of one solution ($).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CostSummary {
    pub total: f64,
    pub policy_zone: f64,
    pub maintenance: f64,
    pub investment: f64,
    pub policy_zone_operational: f64,
    /// Wheeling on lines into the policy zone, part of `policy_zone`.
    pub imports: f64,
}

impl CostSummary {
    /// Policy-zone cost is its generation (including import wheeling),
    /// its maintenance and all investment, which only happens there.
    pub fn of(sol: &PlanSolution) -> Self {
        let mut s = CostSummary::default();
        for c in &sol.costs {
            s.total += c.total();
            s.maintenance += c.maintenance;
            s.investment += c.investment;
            s.policy_zone_operational += c.policy_zone_generation;
            s.imports += c.imports;
            s.policy_zone += c.policy_zone_generation + c.policy_zone_maintenance + c.investment;
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SavingsReport {
    pub baseline: CostSummary,
    pub alternative: CostSummary,
    pub years: Vec<YearSaving>,
}

/// `(baseline − alternative) / vehicles` per year from undiscounted yearly costs.
pub fn levelized_savings(baseline: &PlanSolution, alternative: &PlanSolution, vehicles: &[u64]) -> Result<SavingsReport> {
    if baseline.scenario != alternative.scenario || baseline.years != alternative.years {
        return Err(Error::Mismatch(format!(
            "cannot compare scenario `{}` {:?} with `{}` {:?}",
            baseline.scenario, baseline.years, alternative.scenario, alternative.years
        )));
    }
    if vehicles.len() != baseline.years.len() {
        return Err(Error::Mismatch(format!(
            "{} vehicle counts for {} years",
            vehicles.len(),
            baseline.years.len()
        )));
    }
    let years = baseline
        .costs
        .iter()
        .zip(&alternative.costs)
        .zip(vehicles)
        .map(|((b, a), &n)| {
            let saving = b.annual_total() - a.annual_total();
            YearSaving {
                year: b.year,
                baseline_cost: b.annual_total(),
                alternative_cost: a.annual_total(),
                saving,
                vehicles: n,
                per_vehicle: if n > 0 { saving / n as f64 } else { 0.0 },
            }
        })
        .collect();
    Ok(SavingsReport {
        baseline: CostSummary::of(baseline),
        alternative: CostSummary::of(alternative),
        years,
    })
}
