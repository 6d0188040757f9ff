//! Report files written next to a solved plan.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::slr::IterationRecord;
use crate::solution::PlanSolution;

pub const SOLUTION_FILE: &str = "plan_solution.json";
pub const COSTS_FILE: &str = "costs.csv";
pub const CAPACITY_FILE: &str = "installed_capacity.csv";
pub const HOURLY_FILE: &str = "hourly.csv";
pub const ITERATIONS_FILE: &str = "iterations.csv";

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::io(
        path.display().to_string(),
        std::io::Error::new(std::io::ErrorKind::Other, e.to_string()),
    )
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    for r in rows {
        w.serialize(r).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path.display().to_string(), e))
}

#[derive(Serialize)]
struct CostRow {
    year: u32,
    generation: f64,
    maintenance: f64,
    investment: f64,
    total: f64,
    policy_zone_generation: f64,
    imports: f64,
    policy_zone_maintenance: f64,
    annual_generation: f64,
    annual_maintenance: f64,
    annual_capital: f64,
}

pub fn write_solution(dir: &Path, sol: &PlanSolution) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
    let path = dir.join(SOLUTION_FILE);
    let json = serde_json::to_string_pretty(sol).map_err(|e| io_err(&path, e))?;
    fs::write(&path, json).map_err(|e| Error::io(path.display().to_string(), e))?;
    let costs: Vec<CostRow> = sol
        .costs
        .iter()
        .map(|c| CostRow {
            year: c.year,
            generation: c.generation,
            maintenance: c.maintenance,
            investment: c.investment,
            total: c.total(),
            policy_zone_generation: c.policy_zone_generation,
            imports: c.imports,
            policy_zone_maintenance: c.policy_zone_maintenance,
            annual_generation: c.annual_generation,
            annual_maintenance: c.annual_maintenance,
            annual_capital: c.annual_capital,
        })
        .collect();
    write_csv(&dir.join(COSTS_FILE), &costs)?;
    write_csv(&dir.join(CAPACITY_FILE), &sol.installed)?;
    write_csv(&dir.join(HOURLY_FILE), &sol.hourly)
}

pub fn write_iterations(dir: &Path, log: &[IterationRecord]) -> Result<()> {
    write_csv(&dir.join(ITERATIONS_FILE), log)
}

pub fn read_solution(path: &Path) -> Result<PlanSolution> {
    let file = if path.is_dir() { path.join(SOLUTION_FILE) } else { path.to_path_buf() };
    let text = fs::read_to_string(&file).map_err(|e| Error::io(file.display().to_string(), e))?;
    serde_json::from_str(&text).map_err(|e| io_err(&file, e))
}

/// Peak hourly truck charging demand (MW) per year of a solution.
pub fn ev_charging_peaks(sol: &PlanSolution) -> Vec<(u32, f64)> {
    sol.years
        .iter()
        .map(|&y| {
            let mut by_hour: std::collections::BTreeMap<(&str, usize), f64> = Default::default();
            for r in sol.hourly.iter().filter(|r| r.year == y) {
                *by_hour.entry((r.period.as_str(), r.hour)).or_default() += r.ev_charge + r.ev_unmodeled;
            }
            (y, by_hour.values().copied().fold(0.0, f64::max))
        })
        .collect()
}
