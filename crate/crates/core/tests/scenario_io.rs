//! Loading the shipped scenarios, rejecting broken ones and writing clusters back.

mod common;

use std::fs;
use std::path::Path;

use common::*;
use gridfleet_core::analysis::prepare_fleet;
use gridfleet_core::ev::ChargingRegime;
use gridfleet_core::model::schema::{Owner, SYMBOLS};
use gridfleet_core::model::*;
use gridfleet_core::plan::{build_plan, BalanceMode};

fn copy_dir(from: &Path, to: &Path) {
    fs::create_dir_all(to).unwrap();
    for e in fs::read_dir(from).unwrap() {
        let e = e.unwrap();
        fs::copy(e.path(), to.join(e.file_name())).unwrap();
    }
}

#[test]
fn two_zone_scenario_loads_clean() {
    let s = load_scenario(scenario_dir("toy2z")).unwrap();
    assert_eq!(s.system.zones.len(), 2);
    assert_eq!(s.system.grid.years, vec![2025, 2045]);
    assert!(validate_system(&s.system).is_empty());
    let FleetSource::Clusters(fleet) = &s.fleet else {
        panic!("toy2z ships its clusters");
    };
    assert_eq!(fleet.clusters.len(), 3);
    for c in &fleet.clusters {
        assert!(c.check().is_empty(), "{:?}", c.check());
    }
    assert_eq!(s.system.zones[s.ev_zone].id, "CA");
}

#[test]
fn one_zone_scenario_bootstraps_its_drives() {
    let s = load_scenario(scenario_dir("toy1z")).unwrap();
    assert!(validate_system(&s.system).is_empty());
    let FleetSource::Drives { records, .. } = &s.fleet else {
        panic!("toy1z ships drive records");
    };
    assert_eq!(records.len(), 400);
    let a = prepare_fleet(&s, 4).unwrap();
    let b = prepare_fleet(&s, 4).unwrap();
    assert_eq!(a, b);
    assert!(!a.clusters.is_empty());
}

#[test]
fn bad_rows_are_reported_with_their_file_and_row() {
    let tmp = tempfile::tempdir().unwrap();
    copy_dir(&scenario_dir("toy2z"), tmp.path());
    let path = tmp.path().join("thermal.csv");
    let text = fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let header: Vec<&str> = lines[0].split(',').collect();
    let col = header.iter().position(|h| *h == "p_max").unwrap();
    let mut cells: Vec<String> = lines[2].split(',').map(str::to_string).collect();
    cells[col] = "lots".into();
    lines[2] = cells.join(",");
    fs::write(&path, lines.join("\n") + "\n").unwrap();
    let err = load_scenario(tmp.path()).unwrap_err();
    assert!(err.file.ends_with("thermal.csv"), "{err}");
    assert_eq!(err.row, Some(2));
}

#[test]
fn missing_directory_is_an_error() {
    assert!(load_scenario(scenario_dir("no_such_scenario")).is_err());
}

#[test]
fn written_clusters_read_back_unchanged() {
    let s = load_scenario(scenario_dir("toy2z")).unwrap();
    let FleetSource::Clusters(fleet) = &s.fleet else { unreachable!() };
    let tmp = tempfile::tempdir().unwrap();
    copy_dir(&scenario_dir("toy2z"), tmp.path());
    write_clusters(tmp.path(), fleet, "CA", None).unwrap();
    let again = load_scenario(tmp.path()).unwrap();
    let FleetSource::Clusters(back) = &again.fleet else { unreachable!() };
    assert_eq!(back.clusters.len(), fleet.clusters.len());
    for (a, b) in fleet.clusters.iter().zip(&back.clusters) {
        assert_eq!(a.id, b.id);
        assert_eq!(a.window, b.window);
        for (ya, yb) in a.years.iter().zip(&b.years) {
            assert_eq!(ya.vehicles, yb.vehicles);
            assert!((ya.c_drive_mwh - yb.c_drive_mwh).abs() < 1e-9);
            for (pa, pb) in ya.fixed_profile.iter().zip(&yb.fixed_profile) {
                assert!((pa - pb).abs() < 1e-9);
            }
        }
    }
    for y in 0..fleet.years.len() {
        assert_eq!(fleet.total_vehicles(y), back.total_vehicles(y));
    }
}

#[test]
fn modeled_columns_carry_their_documented_prefixes() {
    let s = load_scenario(scenario_dir("toy2z")).unwrap();
    let FleetSource::Clusters(fleet) = &s.fleet else { unreachable!() };
    let p = build_plan(&s.system, fleet, ChargingRegime::V2g, BalanceMode::Hard).unwrap();
    let names: Vec<&str> = p.model.vars().iter().map(|v| v.name.as_str()).collect();
    for (symbol, owner) in SYMBOLS {
        if let Owner::Column(prefix) = owner {
            let tag = format!("{prefix}[");
            assert!(names.iter().any(|n| n.starts_with(&tag)), "{symbol}: no column {tag}…");
        }
    }
}

#[test]
fn fixed_charging_shares_depot_chargers() {
    use gridfleet_core::analysis::chargers::peak_shared_count;
    let s = load_scenario(scenario_dir("toy1z")).unwrap();
    let fleet = prepare_fleet(&s, 0).unwrap();
    for i in 0..fleet.years.len() {
        let n = fleet.total_vehicles(i) as u64;
        let peak = fleet.fixed_load(i).into_iter().fold(0.0, f64::max);
        let shared = peak_shared_count(n, peak, 150.0);
        let ratio = n as f64 / shared as f64;
        assert!(shared > 0 && ratio > 1.0, "{}: {n} trucks, {shared} chargers", fleet.years[i]);
    }
}
