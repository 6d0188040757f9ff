#![allow(dead_code)]

use std::path::PathBuf;

use gridfleet_core::ev::{ChargingRegime, DischargeConvention, EvFleet};
use gridfleet_core::lp::{HighsBackend, LinExpr, LinearModel, SolveOptions, SolveOutcome, SolverBackend};
use gridfleet_core::model::fixtures::{day_grid, thermal};
use gridfleet_core::model::*;
use gridfleet_core::uc::{build_block, BalanceMode, BlockVars, YearCapacity};

pub fn backend() -> HighsBackend {
    HighsBackend
}

pub fn tight() -> SolveOptions {
    SolveOptions {
        mip_gap: 1e-7,
        ..SolveOptions::default()
    }
}

pub fn scenario_dir(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

pub fn no_policy() -> PolicyYear {
    PolicyYear {
        emissions_cap: f64::INFINITY,
        rps: 0.0,
        prm: 0.0,
        vre_elcc: ElccSurface::default(),
        storage_elcc: ElccSurface::default(),
    }
}

/// One zone, one year, one 24 h day, the given hourly load and nothing else.
pub fn one_zone(load: Vec<f64>) -> SystemData {
    assert_eq!(load.len(), 24);
    SystemData {
        name: "one".into(),
        grid: day_grid(),
        discount_rate: 0.0,
        zones: vec![Zone {
            id: "Z".into(),
            policy_zone: true,
            load,
        }],
        lines: vec![],
        thermal: vec![],
        renewables: vec![],
        storage: vec![],
        hydro: vec![],
        policy: vec![no_policy()],
        ev: Default::default(),
    }
}

/// `one_zone` stretched over the given years, each weighted 1, load repeated.
pub fn one_zone_years(load: Vec<f64>, years: &[u32]) -> SystemData {
    let mut sys = one_zone(load.clone());
    sys.grid.years = years.to_vec();
    sys.grid.year_weights = vec![1.0; years.len()];
    sys.zones[0].load = load.iter().copied().cycle().take(24 * years.len()).collect();
    sys.policy = vec![no_policy(); years.len()];
    sys
}

pub fn gas(id: &str, p_max: f64, p_min: f64, cost: f64) -> ThermalUnit {
    thermal(id, 0, p_max, p_min, cost)
}

pub fn flat_renewable(id: &str, kind: RenewableKind, pf: Vec<f64>, mw: f64, years: usize) -> RenewableResource {
    RenewableResource {
        id: id.into(),
        zone: 0,
        kind,
        production: pf,
        curtailable: true,
        rps_eligible: true,
        curtail_cost: 0.0,
        planned_mw: vec![mw; years],
        candidate: false,
        max_build_mw: 0.0,
        economics: Economics::default(),
    }
}

pub fn battery(id: &str, mw: f64, mwh: f64, eta: f64) -> StorageResource {
    StorageResource {
        id: id.into(),
        zone: 0,
        planned_mw: vec![mw],
        planned_mwh: vec![mwh],
        eta_charge: eta,
        eta_discharge: eta,
        self_discharge: 0.0,
        soc_max_fraction: 1.0,
        soc_min_fraction: 0.0,
        min_charge_hours: 1,
        min_discharge_hours: 1,
        candidate: false,
        max_build_mw: 0.0,
        max_build_mwh: 0.0,
        energy_retirement: false,
        power_economics: Economics::default(),
        energy_economics: Economics::default(),
    }
}

/// First dispatch block of `sys` at planned capacities.
pub fn block(sys: &SystemData, fleet: &EvFleet, regime: ChargingRegime, mode: BalanceMode) -> (LinearModel, BlockVars) {
    let mut model = LinearModel::new();
    let key = sys.grid.blocks().next().unwrap();
    let cap = YearCapacity::planned(sys, 0);
    let vars = build_block(&mut model, sys, fleet, key, &cap, regime, DischargeConvention::Multiply, mode).unwrap();
    (model, vars)
}

pub fn solve(model: &LinearModel) -> SolveOutcome {
    let out = backend().solve(model, &tight()).unwrap();
    assert!(out.status.has_solution(), "status {:?}", out.status);
    out
}

pub fn minimise(model: &mut LinearModel, objective: LinExpr) -> SolveOutcome {
    model.set_objective(objective);
    solve(model)
}

pub fn empty_fleet(sys: &SystemData) -> EvFleet {
    EvFleet::empty(sys.policy_zone(), &sys.grid.years)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}
