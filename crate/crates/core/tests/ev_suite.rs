//! Truck fleet: sampling, clustering, baseline profiles and depot constraints.

mod common;

use common::*;
use gridfleet_core::ev::synthetic::{synthetic_drives, synthetic_population};
use gridfleet_core::ev::*;
use gridfleet_core::uc::BalanceMode;

fn fleet_with(sys: &gridfleet_core::model::SystemData, cluster: EvCluster) -> EvFleet {
    let mut f = empty_fleet(sys);
    f.clusters.push(cluster);
    f
}

fn one_truck(start: usize, end: usize, depot: f64, drive: f64, eta: f64) -> EvCluster {
    let mut y = ClusterYear::empty(2030);
    y.vehicles = 1;
    y.p_max_mw = 0.15;
    y.c_max_mwh = 0.6;
    y.c_min_mwh = 0.06;
    y.c_depot_mwh = depot;
    y.c_drive_mwh = drive;
    let window = ChargeWindow::new(start, end).unwrap();
    y.fixed_profile = fixed_profile(&window, y.p_max_mw, y.grid_energy_mwh(eta)).unwrap();
    EvCluster {
        id: format!("ev_{start:02}_{end:02}"),
        zone: 0,
        window,
        eta_charge: eta,
        eta_discharge: eta,
        years: vec![y],
    }
}

/// Hourly cost of serving `mw`: 100 MW at 20 $/MWh, the rest at 80 $/MWh.
fn supply_cost(mw: f64) -> f64 {
    20.0 * mw.min(100.0) + 80.0 * (mw - 100.0).max(0.0)
}

fn price_day() -> gridfleet_core::model::SystemData {
    let mut load = vec![90.0; 24];
    load[11] = 110.0;
    let mut sys = one_zone(load);
    sys.thermal.push(gas("base", 100.0, 0.0, 20.0));
    sys.thermal.push(gas("peak", 100.0, 0.0, 80.0));
    sys
}

/// Cheapest day for one lossless truck parked 10:00–13:00, by enumerating
/// hourly net charging at 1 kW resolution.
fn brute_force_day(load: &[f64], depot_kwh: i64, drive_kwh: i64, min_kwh: i64, max_kwh: i64, p_kw: i64) -> (f64, [i64; 3]) {
    let base: f64 = load.iter().enumerate().filter(|(h, _)| !(10..13).contains(h)).map(|(_, &l)| supply_cost(l)).sum();
    let mut best = (f64::INFINITY, [0; 3]);
    for n0 in -p_kw..=p_kw {
        let s1 = depot_kwh + n0;
        if s1 < min_kwh || s1 > max_kwh {
            continue;
        }
        for n1 in -p_kw..=p_kw {
            let s2 = s1 + n1;
            if s2 < min_kwh || s2 > max_kwh {
                continue;
            }
            let n2 = drive_kwh - s2;
            if n2.abs() > p_kw {
                continue;
            }
            let n = [n0, n1, n2];
            let cost = base
                + (0..3)
                    .map(|k| supply_cost(load[10 + k] + n[k] as f64 / 1000.0))
                    .sum::<f64>();
            if cost < best.0 - 1e-12 {
                best = (cost, n);
            }
        }
    }
    best
}

#[test]
fn v2g_discharges_into_the_expensive_hour() {
    let sys = price_day();
    let fleet = fleet_with(&sys, one_truck(10, 13, 0.5, 0.6, 1.0));
    let (mut m, b) = block(&sys, &fleet, ChargingRegime::V2g, BalanceMode::Hard);
    let out = minimise(&mut m, b.gen_cost.clone());
    let (oracle, plan) = brute_force_day(&sys.zones[0].load, 500, 600, 60, 600, 150);
    assert!(rel(out.objective, oracle) < 1e-9, "{} vs {oracle}", out.objective);
    assert_eq!(plan[1], -150, "oracle discharges at full power in the peak hour");
    let ev = b.ev[0].as_ref().unwrap();
    let pd = ev.discharge[11].unwrap();
    assert!((out.values[pd.index()] - 0.15).abs() < 1e-7);
    let end = *ev.soc[0].last().unwrap();
    assert!((out.values[end.index()] - 0.6).abs() < 1e-9);
}

#[test]
fn v1g_never_discharges_and_matches_enumeration() {
    let sys = price_day();
    let fleet = fleet_with(&sys, one_truck(10, 13, 0.5, 0.6, 1.0));
    let (mut m, b) = block(&sys, &fleet, ChargingRegime::V1g, BalanceMode::Hard);
    let out = minimise(&mut m, b.gen_cost.clone());
    let ev = b.ev[0].as_ref().unwrap();
    assert!(ev.discharge.iter().all(Option::is_none));
    assert!(ev.mode.iter().all(Option::is_none));
    // enumeration restricted to charging only
    let load = &sys.zones[0].load;
    let mut best = f64::INFINITY;
    for a in 0..=150i64 {
        for c in 0..=150i64 {
            let rest = 100 - a - c;
            if !(0..=150).contains(&rest) {
                continue;
            }
            let n = [a, c, rest];
            let cost: f64 = (0..24)
                .map(|h| {
                    let extra = if (10..13).contains(&h) { n[h - 10] as f64 / 1000.0 } else { 0.0 };
                    supply_cost(load[h] + extra)
                })
                .sum();
            best = best.min(cost);
        }
    }
    assert!(rel(out.objective, best) < 1e-9);
}

#[test]
fn nothing_moves_away_from_the_depot() {
    let sys = price_day();
    let fleet = fleet_with(&sys, one_truck(19, 6, 0.2, 0.6, 0.95));
    let (mut m, b) = block(&sys, &fleet, ChargingRegime::V2g, BalanceMode::Hard);
    let ev = b.ev[0].clone().unwrap();
    for t in 6..19 {
        assert!(ev.charge[t].is_none() && ev.discharge[t].is_none(), "hour {t}");
        assert!(ev.net_charge(t).is_constant() && ev.net_charge(t).constant_part() == 0.0);
    }
    let out = minimise(&mut m, b.gen_cost.clone());
    let soc: Vec<f64> = ev.soc[0].iter().map(|v| out.values[v.index()]).collect();
    assert!((soc[0] - 0.2).abs() < 1e-6 && (soc[soc.len() - 1] - 0.6).abs() < 1e-6);
    // per-day balance: ηc·Σpc − ηd·Σpd equals the pin difference
    let pc: f64 = ev.charge.iter().flatten().map(|v| out.values[v.index()]).sum();
    let pd: f64 = ev.discharge.iter().flatten().map(|v| out.values[v.index()]).sum();
    assert!((0.95 * pc - 0.95 * pd - 0.4).abs() < 1e-6);
}

#[test]
fn fixed_regime_injects_the_profile() {
    let sys = price_day();
    let truck = one_truck(19, 6, 0.2, 0.6, 0.95);
    let profile = truck.years[0].fixed_profile.clone();
    let fleet = fleet_with(&sys, truck);
    let (m, b) = block(&sys, &fleet, ChargingRegime::Fixed, BalanceMode::Residual);
    let x = vec![0.0; m.num_vars()];
    let ev = b.ev[0].as_ref().unwrap();
    assert_eq!(ev.fixed_load, profile);
    for r in &b.balance {
        // supply − demand with everything idle is −(load + truck load)
        let expect = -(sys.zones[0].load[r.hour] + profile[r.hour]);
        assert!((r.expr.eval(&x) - expect).abs() < 1e-12);
    }
}

#[test]
fn charging_five_megawatts_is_load() {
    let sys = price_day();
    let mut truck = one_truck(10, 13, 0.2, 0.6, 1.0);
    truck.years[0].vehicles = 40;
    truck.years[0].p_max_mw = 6.0;
    truck.years[0].c_max_mwh = 24.0;
    truck.years[0].c_drive_mwh = 24.0;
    truck.years[0].c_min_mwh = 0.0;
    let fleet = fleet_with(&sys, truck);
    let (m, b) = block(&sys, &fleet, ChargingRegime::V1g, BalanceMode::Residual);
    let mut x = vec![0.0; m.num_vars()];
    let row = b.balance.iter().find(|r| r.hour == 10).unwrap();
    let before = row.expr.eval(&x);
    x[b.ev[0].as_ref().unwrap().charge[10].unwrap().index()] = 5.0;
    assert!((row.expr.eval(&x) - before + 5.0).abs() < 1e-12);
}

fn synthetic_fleet(seed: u64) -> (Bootstrap, EvFleet, EvSettings) {
    let settings = EvSettings {
        soc_min_fraction: 0.1,
        ..EvSettings::default()
    };
    let records = synthetic_drives(4000, seed);
    let years = [2030, 2040];
    let projections = synthetic_population(&years, 6000, 1.6);
    let boot = bootstrap_fleet(&records, &projections, &settings, seed).unwrap();
    let fleet = cluster_vehicles(&boot.years, &years, 0, &settings).unwrap();
    (boot, fleet, settings)
}

#[test]
fn synthetic_fleet_is_mostly_clustered() {
    let (_, fleet, _) = synthetic_fleet(11);
    for y in 0..fleet.years.len() {
        let c = fleet.coverage(y);
        assert!(c >= 0.90, "coverage {c:.3} in year {}", fleet.years[y]);
    }
}

#[test]
fn profiles_deliver_the_required_energy() {
    let (boot, fleet, settings) = synthetic_fleet(5);
    for c in &fleet.clusters {
        for cy in &c.years {
            let need = cy.grid_energy_mwh(c.eta_charge);
            let got: f64 = cy.fixed_profile.iter().sum();
            assert!((got - need).abs() <= 1e-9 * need.max(1e-12), "{} {}: {got} vs {need}", c.id, cy.year);
        }
    }
    // whole fleet against an independent per-vehicle sum
    for (yi, fy) in boot.years.iter().enumerate() {
        let vehicles: f64 = fy.vehicles.iter().map(|v| v.grid_energy_kwh(settings.eta_charge) / 1000.0).sum();
        let series: f64 = fleet.fixed_load(yi).iter().sum();
        assert!((series - vehicles).abs() <= 1e-9 * vehicles, "{series} vs {vehicles}");
    }
}

#[test]
fn clustered_aggregates_keep_their_ordering() {
    let (_, fleet, _) = synthetic_fleet(3);
    for c in &fleet.clusters {
        assert!(c.check().is_empty(), "{:?}", c.check());
        assert_eq!(c.window.time_wrap() == 24, c.window.start > c.window.end);
    }
}

#[test]
fn bundled_fleet_pins_hold_in_both_controlled_regimes() {
    let sys = price_day();
    for regime in [ChargingRegime::V1g, ChargingRegime::V2g] {
        let fleet = fleet_with(&sys, one_truck(17, 5, 0.25, 0.6, 0.95));
        let (mut m, b) = block(&sys, &fleet, regime, BalanceMode::Hard);
        let out = minimise(&mut m, b.gen_cost.clone());
        let ev = b.ev[0].as_ref().unwrap();
        for day in &ev.soc {
            assert!((out.values[day[0].index()] - 0.25).abs() < 1e-6);
            assert!((out.values[day[day.len() - 1].index()] - 0.6).abs() < 1e-6);
        }
    }
}
