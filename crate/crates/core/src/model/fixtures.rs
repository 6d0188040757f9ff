//! Small in-memory systems for tests and benchmarks.

use super::system::*;
use super::time::{Period, TimeGrid};
use crate::ev::EvSettings;

/// Gas unit with the given limits and costs in `zone`.
pub fn thermal(id: &str, zone: usize, p_max: f64, p_min: f64, cost_slope: f64) -> ThermalUnit {
    ThermalUnit {
        id: id.into(),
        zone,
        p_max,
        p_min,
        ramp_up: p_max,
        ramp_down: p_max,
        min_up_hours: 1,
        min_down_hours: 1,
        startup_cost: 0.0,
        shutdown_cost: 0.0,
        cost_slope,
        cost_intercept: 0.0,
        emission_slope: 0.4,
        emission_intercept: 0.0,
        nqc: 1.0,
        status: UnitStatus::Existing,
        retirable: false,
        planned_from: None,
        planned_until: None,
        economics: Economics::default(),
    }
}

/// One year, one 24-hour period repeated 365 times.
pub fn day_grid() -> TimeGrid {
    TimeGrid {
        years: vec![2030],
        year_weights: vec![1.0],
        hours_per_period: 24,
        periods: vec![Period { id: "day".into(), weight: 365.0 }],
    }
}

/// Two zones joined by one line; gas in both, a solar farm in the policy zone.
pub fn toy_system() -> SystemData {
    let grid = day_grid();
    let load = |base: f64| -> Vec<f64> {
        (0..24)
            .map(|h| base * (0.8 + 0.4 * ((h as f64 - 6.0) / 24.0 * std::f64::consts::TAU).sin().max(0.0)))
            .collect()
    };
    let solar: Vec<f64> = (0..24)
        .map(|h| ((h as f64 - 6.0) / 12.0 * std::f64::consts::PI).sin().max(0.0))
        .collect();
    SystemData {
        name: "toy".into(),
        grid,
        discount_rate: 0.05,
        zones: vec![
            Zone { id: "A".into(), policy_zone: true, load: load(100.0) },
            Zone { id: "B".into(), policy_zone: false, load: load(50.0) },
        ],
        lines: vec![Line {
            id: "AB".into(),
            incidence: vec![(0, 1), (1, -1)],
            limit_mw: 40.0,
            wheeling_cost: 1.0,
            import_emission_rate: 0.4,
        }],
        thermal: vec![
            thermal("gasA", 0, 150.0, 20.0, 40.0),
            thermal("gasB", 1, 120.0, 10.0, 30.0),
        ],
        renewables: vec![RenewableResource {
            id: "pvA".into(),
            zone: 0,
            kind: RenewableKind::Solar,
            production: solar,
            curtailable: true,
            rps_eligible: true,
            curtail_cost: 0.0,
            planned_mw: vec![30.0],
            candidate: false,
            max_build_mw: 0.0,
            economics: Economics::default(),
        }],
        storage: Vec::new(),
        hydro: Vec::new(),
        policy: vec![PolicyYear {
            emissions_cap: 1e12,
            rps: 0.0,
            prm: 0.0,
            vre_elcc: ElccSurface::default(),
            storage_elcc: ElccSurface::default(),
        }],
        ev: EvSettings::default(),
    }
}
