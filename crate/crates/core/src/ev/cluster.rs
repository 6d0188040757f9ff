use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::bootstrap::FleetYear;
use super::profile::{fixed_profile, immediate_profile};
use super::vehicle::{MinuteOfDay, Vehicle};
use super::{EvError, EvSettings};

/// Whole-hour depot window. Charging may happen in hours
/// `start, start+1, …, start+length-1` (mod 24); the vehicle leaves at `end`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChargeWindow {
    /// Depot hour (arrival rounded up).
    pub start: usize,
    /// Drive hour (departure rounded down).
    pub end: usize,
    pub length: usize,
}

impl ChargeWindow {
    pub fn new(start: usize, end: usize) -> Option<Self> {
        if start > 23 || end > 23 || start == end {
            return None;
        }
        let length = if start < end { end - start } else { end + 24 - start };
        Some(ChargeWindow { start, end, length })
    }

    /// 24 when the window runs over midnight, else 0.
    pub fn time_wrap(&self) -> usize {
        if self.start > self.end {
            24
        } else {
            0
        }
    }

    /// Hours of day (0..24) during which charging is possible.
    pub fn hours(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.length).map(move |k| (self.start + k) % 24)
    }

    pub fn contains(&self, hour_of_day: usize) -> bool {
        let k = (hour_of_day + 24 - self.start) % 24;
        k < self.length
    }
}

/// Rounds a depot stay inward to whole hours: arrival up to the next hour,
/// departure down to the previous one. Returns `None` if nothing is left.
pub fn charge_window(arrival: MinuteOfDay, departure: MinuteOfDay) -> Option<ChargeWindow> {
    let arrival = u32::from(arrival);
    let dwell = (u32::from(departure) + 1440 - arrival) % 1440;
    if dwell == 0 {
        return None;
    }
    let start = arrival.div_ceil(60);
    let end = (arrival + dwell) / 60;
    if end <= start {
        return None;
    }
    ChargeWindow::new((start % 24) as usize, (end % 24) as usize)
}

/// Cluster aggregates for one investment year (MW / MWh).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterYear {
    pub year: u32,
    pub vehicles: usize,
    pub p_max_mw: f64,
    pub c_max_mwh: f64,
    pub c_min_mwh: f64,
    pub c_depot_mwh: f64,
    pub c_drive_mwh: f64,
    /// Baseline charging MW per hour of day.
    pub fixed_profile: Vec<f64>,
}

impl ClusterYear {
    pub fn empty(year: u32) -> Self {
        ClusterYear {
            year,
            vehicles: 0,
            p_max_mw: 0.0,
            c_max_mwh: 0.0,
            c_min_mwh: 0.0,
            c_depot_mwh: 0.0,
            c_drive_mwh: 0.0,
            fixed_profile: vec![0.0; 24],
        }
    }

    /// Grid-side energy drawn per day.
    pub fn grid_energy_mwh(&self, eta_charge: f64) -> f64 {
        (self.c_drive_mwh - self.c_depot_mwh) / eta_charge
    }
}

/// Virtual power plant of trucks sharing a depot window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvCluster {
    pub id: String,
    pub zone: usize,
    pub window: ChargeWindow,
    pub eta_charge: f64,
    pub eta_discharge: f64,
    /// Aligned with the planning years.
    pub years: Vec<ClusterYear>,
}

impl EvCluster {
    /// Violations of the SoC ordering and window invariants.
    pub fn check(&self) -> Vec<String> {
        let mut out = Vec::new();
        let tol = 1e-9;
        for y in &self.years {
            if y.vehicles == 0 && y.p_max_mw == 0.0 {
                continue;
            }
            if !(y.c_min_mwh <= y.c_depot_mwh + tol
                && y.c_depot_mwh <= y.c_drive_mwh + tol
                && y.c_drive_mwh <= y.c_max_mwh + tol)
            {
                out.push(format!(
                    "cluster {} year {}: SoC ordering min ≤ depot ≤ drive ≤ max violated",
                    self.id, y.year
                ));
            }
            if y.grid_energy_mwh(self.eta_charge) > y.p_max_mw * self.window.length as f64 * (1.0 + 1e-9) + tol {
                out.push(format!(
                    "cluster {} year {}: energy need exceeds what the window can deliver",
                    self.id, y.year
                ));
            }
        }
        if !(self.eta_charge > 0.0 && self.eta_charge <= 1.0 && self.eta_discharge > 0.0 && self.eta_discharge <= 1.0) {
            out.push(format!("cluster {}: efficiencies must lie in (0, 1]", self.id));
        }
        out
    }
}

/// Charging of vehicles left out of the controllable clusters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnmodeledYear {
    pub year: u32,
    pub vehicles: usize,
    /// MW per hour of day.
    pub profile: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvFleet {
    pub zone: usize,
    pub years: Vec<u32>,
    pub clusters: Vec<EvCluster>,
    pub unmodeled: Vec<UnmodeledYear>,
}

impl EvFleet {
    pub fn empty(zone: usize, years: &[u32]) -> Self {
        EvFleet {
            zone,
            years: years.to_vec(),
            clusters: Vec::new(),
            unmodeled: years
                .iter()
                .map(|&year| UnmodeledYear {
                    year,
                    vehicles: 0,
                    profile: vec![0.0; 24],
                })
                .collect(),
        }
    }

    pub fn modeled_vehicles(&self, year_idx: usize) -> usize {
        self.clusters.iter().map(|c| c.years[year_idx].vehicles).sum()
    }

    pub fn total_vehicles(&self, year_idx: usize) -> usize {
        self.modeled_vehicles(year_idx) + self.unmodeled[year_idx].vehicles
    }

    /// Share of vehicles in controllable clusters.
    pub fn coverage(&self, year_idx: usize) -> f64 {
        let total = self.total_vehicles(year_idx);
        if total == 0 {
            return 1.0;
        }
        self.modeled_vehicles(year_idx) as f64 / total as f64
    }

    /// Baseline EV load per hour of day (clusters on their fixed profiles plus unmodeled).
    pub fn fixed_load(&self, year_idx: usize) -> Vec<f64> {
        let mut out = self.unmodeled[year_idx].profile.clone();
        for c in &self.clusters {
            for (h, p) in c.years[year_idx].fixed_profile.iter().enumerate() {
                out[h] += p;
            }
        }
        out
    }
}

fn vehicle_profile(v: &Vehicle, eta_charge: f64) -> Vec<f64> {
    let p = v.charger_kw / 1000.0;
    let e = v.grid_energy_kwh(eta_charge) / 1000.0;
    if let Some(w) = charge_window(v.depot_arrival, v.depot_departure) {
        if let Ok(profile) = fixed_profile(&w, p, e) {
            return profile;
        }
    }
    // no usable whole-hour window: charge flat out from the arrival hour
    immediate_profile((v.depot_arrival / 60) as usize, p, e)
}

/// Groups vehicles by rounded depot window; windows holding less than
/// `settings.cluster_threshold` of a year's fleet stay on fixed charging.
pub fn cluster_vehicles(
    fleet: &[FleetYear],
    years: &[u32],
    zone: usize,
    settings: &EvSettings,
) -> Result<EvFleet, EvError> {
    let eta = settings.eta_charge;
    let mut by_window: BTreeMap<ChargeWindow, Vec<ClusterYear>> = BTreeMap::new();
    let mut unmodeled = Vec::with_capacity(years.len());

    for (yi, &year) in years.iter().enumerate() {
        let vehicles: &[Vehicle] = fleet
            .iter()
            .find(|f| f.year == year)
            .map_or(&[], |f| f.vehicles.as_slice());
        let total = vehicles.len();
        let mut groups: BTreeMap<ChargeWindow, Vec<&Vehicle>> = BTreeMap::new();
        let mut leftover = UnmodeledYear {
            year,
            vehicles: 0,
            profile: vec![0.0; 24],
        };
        let push_unmodeled = |v: &Vehicle, acc: &mut UnmodeledYear| {
            acc.vehicles += 1;
            for (h, p) in vehicle_profile(v, eta).iter().enumerate() {
                acc.profile[h] += p;
            }
        };
        for v in vehicles {
            match charge_window(v.depot_arrival, v.depot_departure) {
                Some(w)
                    if v.grid_energy_kwh(eta)
                        <= v.charger_kw * w.length as f64 * (1.0 + 1e-12) =>
                {
                    groups.entry(w).or_default().push(v)
                }
                _ => push_unmodeled(v, &mut leftover),
            }
        }
        for (w, members) in groups {
            let share = members.len() as f64 / total as f64;
            if share < settings.cluster_threshold {
                for v in members {
                    push_unmodeled(v, &mut leftover);
                }
                continue;
            }
            let mut cy = ClusterYear::empty(year);
            cy.vehicles = members.len();
            for v in &members {
                cy.p_max_mw += v.charger_kw / 1000.0;
                cy.c_max_mwh += v.capacity_kwh / 1000.0;
                cy.c_min_mwh += v.min_soc_kwh / 1000.0;
                cy.c_depot_mwh += v.arrival_soc_kwh / 1000.0;
                cy.c_drive_mwh += v.departure_soc_kwh / 1000.0;
            }
            cy.fixed_profile = fixed_profile(&w, cy.p_max_mw, cy.grid_energy_mwh(eta))?;
            let slot = by_window
                .entry(w)
                .or_insert_with(|| years.iter().map(|&y| ClusterYear::empty(y)).collect());
            slot[yi] = cy;
        }
        unmodeled.push(leftover);
    }

    let clusters = by_window
        .into_iter()
        .map(|(window, years)| EvCluster {
            id: format!("ev_{:02}_{:02}", window.start, window.end),
            zone,
            window,
            eta_charge: settings.eta_charge,
            eta_discharge: settings.eta_discharge,
            years,
        })
        .collect();
    Ok(EvFleet {
        zone,
        years: years.to_vec(),
        clusters,
        unmodeled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ev::vehicle::VehicleClass;

    fn vehicle(arr: u16, dep: u16, consumption: f64) -> Vehicle {
        Vehicle {
            class: VehicleClass::Class8,
            vocation: "x".into(),
            depot_arrival: arr,
            depot_departure: dep,
            charger_kw: 150.0,
            capacity_kwh: 600.0,
            min_soc_kwh: 0.0,
            arrival_soc_kwh: 600.0 - consumption,
            departure_soc_kwh: 600.0,
        }
    }

    #[test]
    fn overnight_rounding() {
        let w = charge_window(18 * 60 + 20, 6 * 60 + 40).unwrap();
        assert_eq!((w.start, w.end, w.length, w.time_wrap()), (19, 6, 11, 24));
    }

    #[test]
    fn on_the_hour_keeps_the_hour() {
        let w = charge_window(18 * 60, 22 * 60).unwrap();
        assert_eq!((w.start, w.end, w.time_wrap()), (18, 22, 0));
    }

    #[test]
    fn short_stay_is_empty() {
        assert_eq!(charge_window(10 * 60 + 20, 10 * 60 + 40), None);
        assert_eq!(charge_window(600, 600), None);
        // 20 minutes across midnight but no full hour
        assert_eq!(charge_window(23 * 60 + 50, 10), None);
    }

    #[test]
    fn long_stay_across_the_same_hour() {
        // arrival 10:20, departure 10:40 next day
        let w = charge_window(10 * 60 + 40, 10 * 60 + 20).unwrap();
        assert_eq!((w.start, w.end, w.length), (11, 10, 23));
    }

    #[test]
    fn window_hours_and_membership() {
        let w = ChargeWindow::new(22, 2).unwrap();
        assert_eq!(w.hours().collect::<Vec<_>>(), vec![22, 23, 0, 1]);
        assert!(w.contains(23) && w.contains(1) && !w.contains(2) && !w.contains(12));
    }

    #[test]
    fn small_cluster_is_left_unmodeled() {
        let mut vehicles = Vec::new();
        for _ in 0..9_995 {
            vehicles.push(vehicle(18 * 60, 6 * 60, 100.0));
        }
        for _ in 0..5 {
            vehicles.push(vehicle(9 * 60, 15 * 60, 100.0));
        }
        let fleet = vec![FleetYear { year: 2030, vehicles }];
        let out = cluster_vehicles(&fleet, &[2030], 0, &EvSettings::default()).unwrap();
        assert_eq!(out.clusters.len(), 1);
        assert_eq!(out.unmodeled[0].vehicles, 5);
        assert_eq!(out.total_vehicles(0), 10_000);
        assert!((out.coverage(0) - 0.9995).abs() < 1e-12);
    }

    #[test]
    fn aggregates_sum_members() {
        let fleet = vec![FleetYear {
            year: 2030,
            vehicles: vec![vehicle(18 * 60 + 10, 6 * 60, 100.0), vehicle(18 * 60 + 5, 6 * 60 + 30, 300.0)],
        }];
        let out = cluster_vehicles(&fleet, &[2030], 0, &EvSettings::default()).unwrap();
        let c = &out.clusters[0];
        assert_eq!(c.id, "ev_19_06");
        let y = &c.years[0];
        assert_eq!(y.vehicles, 2);
        assert!((y.p_max_mw - 0.3).abs() < 1e-12);
        assert!((y.c_max_mwh - 1.2).abs() < 1e-12);
        assert!((y.c_depot_mwh - 0.8).abs() < 1e-12);
        assert!((y.c_drive_mwh - 1.2).abs() < 1e-12);
        assert!(c.check().is_empty());
    }
}
