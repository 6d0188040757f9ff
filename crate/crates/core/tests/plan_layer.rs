//! Investment stock, policy rows and the cost ledger of small planning models.

mod common;

use common::*;
use gridfleet_core::ev::ChargingRegime;
use gridfleet_core::lp::{LinExpr, SolverBackend};
use gridfleet_core::model::*;
use gridfleet_core::plan::{build_plan, BalanceMode, PlanningModel};
use gridfleet_core::slr::solve_monolithic;
use gridfleet_core::uc::StatusLink;

fn plan(sys: &SystemData) -> PlanningModel {
    build_plan(sys, &empty_fleet(sys), ChargingRegime::Fixed, BalanceMode::Hard).unwrap()
}

fn var(p: &PlanningModel, name: &str) -> gridfleet_core::lp::VarId {
    let i = p.model.vars().iter().position(|v| v.name == name).unwrap_or_else(|| panic!("no column {name}"));
    gridfleet_core::lp::VarId::from_index(i)
}

fn status_var(link: StatusLink) -> gridfleet_core::lp::VarId {
    match link {
        StatusLink::Var(v) => v,
        StatusLink::Fixed(_) => panic!("status is fixed"),
    }
}

/// Three years, load rising in the middle year beyond the existing unit.
fn growth_system() -> SystemData {
    let years = [2030, 2035, 2040];
    let mut sys = one_zone_years(vec![80.0; 24], &years);
    sys.zones[0].load = [80.0, 130.0, 130.0].iter().flat_map(|&l| vec![l; 24]).collect();
    sys.thermal.push(gas("old", 100.0, 0.0, 30.0));
    let mut new = gas("new", 60.0, 0.0, 25.0);
    new.status = UnitStatus::Candidate;
    new.planned_from = Some(2035);
    new.economics = Economics {
        capital: 1.0e6,
        maintenance: 1.0e4,
        lifetime_years: 20.0,
    };
    sys.thermal.push(new);
    sys
}

#[test]
fn unit_built_in_second_year_stays_online() {
    let sys = growth_system();
    let p = plan(&sys);
    let out = solve_monolithic(&p, &backend(), &tight()).unwrap();
    let ti = &p.investment.thermal[1];
    let iu: Vec<f64> = ti.status.iter().map(|&s| out.values[status_var(s).index()].round()).collect();
    let built: Vec<f64> = ti.build.iter().map(|b| out.values[b.unwrap().index()].round()).collect();
    assert_eq!(iu, vec![0.0, 1.0, 1.0]);
    assert_eq!(built, vec![0.0, 1.0, 0.0]);
}

#[test]
fn offline_unit_cannot_commit() {
    let sys = growth_system();
    let mut p = plan(&sys);
    let iu = status_var(p.investment.thermal[1].status[2]);
    p.model.fix(iu, 0.0);
    // relax the balance so only the status link can hold commitment down
    let mut m = p.model.without_families(&[gridfleet_core::lp::Family::Balance]);
    let mut obj = LinExpr::new();
    for b in p.blocks.iter().filter(|b| b.key.year == 2) {
        for &v in &b.thermal[1].commit {
            obj.add_term(v, -1.0);
        }
    }
    m.set_objective(obj);
    let out = backend().solve(&m, &tight()).unwrap();
    assert!(out.objective.abs() < 1e-9, "commitment escaped IU = 0");
}

#[test]
fn investment_cost_two_equal_years() {
    let mut sys = one_zone_years(vec![0.0; 24], &[2030, 2031]);
    let mut pv = flat_renewable("pv", RenewableKind::Solar, vec![0.5; 24], 0.0, 2);
    pv.candidate = true;
    pv.max_build_mw = 10.0;
    pv.economics = Economics {
        capital: 100.0 * 20.0,
        maintenance: 0.0,
        lifetime_years: 20.0,
    };
    sys.renewables.push(pv);
    let p = plan(&sys);
    let mut x = vec![0.0; p.model.num_vars()];
    x[var(&p, "ic_ren_build[pv,2030]").index()] = 1.0;
    x[var(&p, "ic_ren[pv,2030]").index()] = 1.0;
    x[var(&p, "ic_ren[pv,2031]").index()] = 1.0;
    let ledger = p.cost_ledger(&sys.grid.years, &x);
    let investment: f64 = ledger.iter().map(|c| c.investment).sum();
    assert!((investment - 200.0).abs() < 1e-9, "{investment}");
    assert!((ledger[0].investment - 200.0).abs() < 1e-9);
    assert_eq!(ledger[1].investment, 0.0);
}

#[test]
fn storage_power_caps_hourly_charging() {
    let mut sys = one_zone(vec![0.0; 24]);
    let mut b = battery("b", 0.0, 0.0, 0.9);
    b.candidate = true;
    b.max_build_mw = 200.0;
    b.max_build_mwh = 800.0;
    sys.storage.push(b);
    let mut p = plan(&sys);
    let ic = var(&p, "ic_st[b,2030]");
    p.model.fix(ic, 50.0);
    let s = p.blocks[0].storage[0].clone().unwrap();
    let mut obj = LinExpr::new();
    for &c in &s.charge {
        obj.add_term(c, -1.0);
    }
    let mut m = p.model.without_families(&[gridfleet_core::lp::Family::Balance]);
    m.set_objective(obj);
    let out = backend().solve(&m, &tight()).unwrap();
    assert!(s.charge.iter().all(|c| out.values[c.index()] <= 50.0 + 1e-7));
}

#[test]
fn clean_fleet_needs_no_emissions_row() {
    let mut sys = one_zone(vec![50.0; 24]);
    let mut u = gas("clean", 100.0, 0.0, 10.0);
    u.emission_slope = 0.0;
    sys.thermal.push(u);
    sys.policy[0].emissions_cap = 1000.0;
    let p = plan(&sys);
    assert!(p.policy_rows[0].emissions.is_none());
    let out = solve_monolithic(&p, &backend(), &tight()).unwrap();
    assert!(p.blocks[0].emissions.eval(&out.values).abs() < 1e-9);
}

#[test]
fn exports_carry_no_emissions() {
    let mut sys = gridfleet_core::model::fixtures::toy_system();
    // make the policy zone the cheap exporter
    sys.thermal[0].cost_slope = 5.0;
    sys.thermal[0].emission_slope = 0.0;
    // a zero cap stays feasible only if exporting hours book no imports
    sys.policy[0].emissions_cap = 0.0;
    let p = plan(&sys);
    assert!(p.policy_rows[0].emissions.is_some());
    let out = solve_monolithic(&p, &backend(), &tight()).unwrap();
    let mut exported = 0.0;
    for b in &p.blocks {
        for t in 0..24 {
            exported += (-b.lines[0].flow(t).eval(&out.values)).max(0.0);
        }
        let imports = b.lines[0].import.as_ref().unwrap();
        assert!(imports.iter().all(|m| out.values[m.index()].abs() < 1e-7));
        assert!(b.emissions.eval(&out.values).abs() < 1e-7);
    }
    assert!(exported > 1.0, "toy should export from the policy zone");
}

fn two_unit_toy(cap: f64) -> SystemData {
    let mut sys = one_zone(vec![80.0; 24]);
    let mut dirty = gas("coal", 100.0, 0.0, 20.0);
    dirty.emission_slope = 1.0;
    let mut clean = gas("ccgt", 100.0, 0.0, 45.0);
    clean.emission_slope = 0.35;
    sys.thermal.push(dirty);
    sys.thermal.push(clean);
    sys.policy[0].emissions_cap = cap;
    sys
}

/// Emissions-capped dispatch of the two-unit toy solved in closed form:
/// coal runs until the cap binds, gas covers the rest.
fn cap_oracle(cap: f64) -> f64 {
    let energy = 80.0 * 24.0 * 365.0;
    let coal = ((cap - 0.35 * energy) / (1.0 - 0.35)).clamp(0.0, energy);
    coal * 20.0 + (energy - coal) * 45.0
}

#[test]
fn tighter_caps_never_cost_less() {
    let full = 80.0 * 24.0 * 365.0;
    let mut last = f64::NEG_INFINITY;
    for cap in [1.0 * full, 0.8 * full, 0.6 * full, 0.45 * full] {
        let sys = two_unit_toy(cap);
        let p = plan(&sys);
        let out = solve_monolithic(&p, &backend(), &tight()).unwrap();
        assert!(rel(out.objective, cap_oracle(cap)) < 1e-6, "cap {cap}: {} vs {}", out.objective, cap_oracle(cap));
        assert!(out.objective >= last - 1e-6 * last.abs());
        last = out.objective;
    }
}

#[test]
fn zero_rps_adds_no_row() {
    let mut sys = one_zone(vec![50.0; 24]);
    sys.thermal.push(gas("g", 100.0, 0.0, 10.0));
    let p = plan(&sys);
    assert!(p.policy_rows[0].rps.is_none());
    assert!(p.policy_rows[0].emissions.is_none());
    assert!(p.policy_rows[0].prm.is_none());
}

#[test]
fn ineligible_resource_earns_no_renewable_credit() {
    let mut sys = one_zone(vec![50.0; 24]);
    let mut nuke = flat_renewable("nuke", RenewableKind::Firm, vec![1.0; 24], 30.0, 1);
    nuke.curtailable = false;
    nuke.rps_eligible = false;
    sys.renewables.push(nuke);
    sys.thermal.push(gas("gas", 100.0, 0.0, 10.0));
    let p = plan(&sys);
    let x = vec![0.0; p.model.num_vars()];
    for b in &p.blocks {
        assert!(b.rps_energy.terms().is_empty());
        assert_eq!(b.rps_energy.eval(&x), 0.0);
    }
}

#[test]
fn full_rps_forces_gas_off() {
    let mut sys = one_zone(vec![50.0; 24]);
    sys.thermal.push(gas("gas", 100.0, 0.0, 10.0));
    let mut wind = flat_renewable("wind", RenewableKind::Wind, vec![0.5; 24], 0.0, 1);
    wind.candidate = true;
    wind.max_build_mw = 300.0;
    wind.economics = Economics {
        capital: 1.0e6,
        maintenance: 0.0,
        lifetime_years: 20.0,
    };
    sys.renewables.push(wind);
    sys.policy[0].rps = 1.0;
    let p = plan(&sys);
    let out = solve_monolithic(&p, &backend(), &tight()).unwrap();
    for b in &p.blocks {
        for &g in &b.thermal[0].gen {
            assert!(out.values[g.index()].abs() < 1e-5);
        }
    }
    // without the target the cheap gas unit serves everything
    sys.policy[0].rps = 0.0;
    let p0 = plan(&sys);
    let free = solve_monolithic(&p0, &backend(), &tight()).unwrap();
    assert!(free.objective < out.objective);
}

#[test]
fn reserve_margin_from_thermal_alone() {
    let mut sys = one_zone(vec![50.0; 24]);
    let mut u = gas("g", 100.0, 0.0, 10.0);
    u.nqc = 0.9;
    sys.thermal.push(u);
    sys.policy[0].prm = 89.0;
    assert!(solve_monolithic(&plan(&sys), &backend(), &tight()).is_ok());
    sys.policy[0].prm = 91.0;
    assert!(solve_monolithic(&plan(&sys), &backend(), &tight()).is_err());
}

/// Largest credit the PRM row can draw on at fixed planned capacities.
fn max_credit(sys: &SystemData) -> f64 {
    let p = plan(sys);
    let x = p.elcc[0].vre.expect("credit column");
    let mut m = p.model.clone();
    m.set_objective(LinExpr::term(x, -1.0));
    let out = backend().solve(&m, &tight()).unwrap();
    out.values[x.index()]
}

fn elcc_system(solar: f64, wind: f64, planes: &[(f64, f64, f64)]) -> SystemData {
    let mut sys = one_zone(vec![10.0; 24]);
    sys.thermal.push(gas("g", 1000.0, 0.0, 10.0));
    sys.renewables.push(flat_renewable("pv", RenewableKind::Solar, vec![0.0; 24], solar, 1));
    sys.renewables.push(flat_renewable("wt", RenewableKind::Wind, vec![0.0; 24], wind, 1));
    sys.policy[0].prm = 1.0;
    sys.policy[0].vre_elcc = ElccSurface {
        planes: planes
            .iter()
            .map(|&(intercept, wind_slope, solar_slope)| ElccPlane {
                intercept,
                wind_slope,
                solar_slope,
                storage_slope: 0.0,
            })
            .collect(),
    };
    sys
}

#[test]
fn single_plane_credit_is_linear() {
    let a = max_credit(&elcc_system(100.0, 0.0, &[(0.0, 0.0, 0.5)]));
    let b = max_credit(&elcc_system(200.0, 0.0, &[(0.0, 0.0, 0.5)]));
    assert!((a - 50.0).abs() < 1e-7 && (b - 100.0).abs() < 1e-7, "{a} {b}");
}

#[test]
fn two_planes_give_the_pointwise_minimum() {
    let planes = [(0.0, 0.4, 0.5), (40.0, 0.15, 0.1)];
    for solar in [0.0, 60.0, 150.0, 400.0] {
        for wind in [0.0, 80.0, 300.0] {
            let got = max_credit(&elcc_system(solar, wind, &planes));
            let oracle = planes
                .iter()
                .map(|&(c, w, s)| c + w * wind + s * solar)
                .fold(f64::INFINITY, f64::min)
                .min(solar + wind)
                .max(0.0);
            assert!((got - oracle).abs() < 1e-6, "solar {solar} wind {wind}: {got} vs {oracle}");
        }
    }
}

#[test]
fn generation_cost_scales_with_block_weight() {
    let mut sys = one_zone(vec![40.0; 24]);
    sys.grid.hours_per_period = 72;
    sys.grid.periods[0].weight = 365.0 / 3.0;
    sys.zones[0].load = vec![40.0; 72];
    sys.thermal.push(gas("g", 100.0, 0.0, 10.0));
    let p = plan(&sys);
    let out = solve_monolithic(&p, &backend(), &tight()).unwrap();
    let block_cost = p.blocks[0].gen_cost.eval(&out.values);
    let ledger = p.cost_ledger(&sys.grid.years, &out.values);
    assert!(rel(ledger[0].generation, 365.0 / 3.0 * block_cost) < 1e-12);
}

#[test]
fn idle_system_pays_only_planned_maintenance() {
    let mut sys = one_zone(vec![0.0; 24]);
    let mut u = gas("g", 100.0, 0.0, 10.0);
    u.economics.maintenance = 3.0e5;
    sys.thermal.push(u);
    let mut pv = flat_renewable("pv", RenewableKind::Solar, vec![0.0; 24], 40.0, 1);
    pv.economics.maintenance = 1.0e3;
    sys.renewables.push(pv);
    let p = plan(&sys);
    let out = solve_monolithic(&p, &backend(), &tight()).unwrap();
    assert!(rel(out.objective, 3.0e5 + 40.0 * 1.0e3) < 1e-9, "{}", out.objective);
}
