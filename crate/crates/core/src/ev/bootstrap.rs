use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::vehicle::{DriveRecord, Vehicle, VehicleClass};
use super::{EvError, EvSettings};

/// Projected vehicle count for one (year, class, vocation) stratum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Projection {
    pub year: u32,
    pub class: VehicleClass,
    pub vocation: String,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FleetYear {
    pub year: u32,
    pub vehicles: Vec<Vehicle>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Bootstrap {
    pub years: Vec<FleetYear>,
    /// Records dropped because a day of driving would exceed the usable pack.
    pub rejected_records: usize,
}

pub(crate) fn vehicle_from_record(record: &DriveRecord, settings: &EvSettings) -> Option<Vehicle> {
    let spec = record.class.spec();
    let capacity = spec.capacity_kwh;
    let departure_soc = settings.soc_drive_fraction * capacity;
    let min_soc = settings.soc_min_fraction * capacity;
    let arrival_soc = departure_soc - record.consumption_kwh();
    if arrival_soc < min_soc || record.miles <= 0.0 {
        return None;
    }
    Some(Vehicle {
        class: record.class,
        vocation: record.vocation.clone(),
        depot_arrival: record.end,
        depot_departure: record.start,
        charger_kw: settings.charger_kw,
        capacity_kwh: capacity,
        min_soc_kwh: min_soc,
        arrival_soc_kwh: arrival_soc,
        departure_soc_kwh: departure_soc,
    })
}

/// Samples drive records with replacement, stratified by class and vocation,
/// until every projected count is met. The same seed gives the same fleet.
pub fn bootstrap_fleet(
    records: &[DriveRecord],
    projections: &[Projection],
    settings: &EvSettings,
    seed: u64,
) -> Result<Bootstrap, EvError> {
    let mut strata: BTreeMap<(VehicleClass, &str), Vec<Vehicle>> = BTreeMap::new();
    let mut rejected = 0;
    for r in records {
        match vehicle_from_record(r, settings) {
            Some(v) => strata.entry((r.class, r.vocation.as_str())).or_default().push(v),
            None => rejected += 1,
        }
    }
    if rejected > 0 {
        log::warn!("dropped {rejected} drive records whose consumption exceeds the usable battery");
    }

    let mut ordered: Vec<&Projection> = projections.iter().collect();
    ordered.sort_by(|a, b| {
        (a.year, a.class, &a.vocation).cmp(&(b.year, b.class, &b.vocation))
    });

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut years: BTreeMap<u32, Vec<Vehicle>> = BTreeMap::new();
    for p in ordered {
        let bucket = years.entry(p.year).or_default();
        if p.count == 0 {
            continue;
        }
        let pool = strata
            .get(&(p.class, p.vocation.as_str()))
            .filter(|v| !v.is_empty())
            .ok_or_else(|| EvError::EmptyStratum {
                year: p.year,
                class: p.class,
                vocation: p.vocation.clone(),
            })?;
        for _ in 0..p.count {
            bucket.push(pool[rng.gen_range(0..pool.len())].clone());
        }
    }
    Ok(Bootstrap {
        years: years
            .into_iter()
            .map(|(year, vehicles)| FleetYear { year, vehicles })
            .collect(),
        rejected_records: rejected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(class: VehicleClass, voc: &str, miles: f64) -> DriveRecord {
        DriveRecord {
            class,
            vocation: voc.into(),
            start: 7 * 60,
            end: 17 * 60,
            miles,
        }
    }

    #[test]
    fn arrival_soc_from_consumption() {
        let s = EvSettings::default();
        let v = vehicle_from_record(&record(VehicleClass::Class8, "a", 100.0), &s).unwrap();
        assert!((v.arrival_soc_kwh - 420.0).abs() < 1e-9);
        assert_eq!(v.departure_soc_kwh, 600.0);
        assert_eq!(v.depot_arrival, 17 * 60);
    }

    #[test]
    fn over_range_record_is_rejected() {
        let s = EvSettings::default();
        let recs = vec![
            record(VehicleClass::Class2To3, "a", 500.0),
            record(VehicleClass::Class2To3, "a", 50.0),
        ];
        let proj = vec![Projection {
            year: 2030,
            class: VehicleClass::Class2To3,
            vocation: "a".into(),
            count: 4,
        }];
        let b = bootstrap_fleet(&recs, &proj, &s, 1).unwrap();
        assert_eq!(b.rejected_records, 1);
        assert!(b.years[0]
            .vehicles
            .iter()
            .all(|v| (v.arrival_soc_kwh - 70.0).abs() < 1e-9));
    }

    #[test]
    fn zero_projection_yields_no_vehicles() {
        let s = EvSettings::default();
        let proj = vec![Projection {
            year: 2030,
            class: VehicleClass::Class7,
            vocation: "none".into(),
            count: 0,
        }];
        let b = bootstrap_fleet(&[], &proj, &s, 3).unwrap();
        assert_eq!(b.years.len(), 1);
        assert!(b.years[0].vehicles.is_empty());
    }

    #[test]
    fn empty_stratum_names_the_stratum() {
        let s = EvSettings::default();
        let proj = vec![Projection {
            year: 2035,
            class: VehicleClass::Class7,
            vocation: "refuse".into(),
            count: 2,
        }];
        let err = bootstrap_fleet(&[record(VehicleClass::Class8, "refuse", 10.0)], &proj, &s, 0)
            .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("refuse") && msg.contains('7') && msg.contains("2035"), "{msg}");
    }

    #[test]
    fn sampling_is_deterministic_and_uniform() {
        let s = EvSettings::default();
        let recs: Vec<_> = [10.0, 20.0, 30.0]
            .iter()
            .map(|&m| record(VehicleClass::Class4To6, "box", m))
            .collect();
        let proj = vec![Projection {
            year: 2030,
            class: VehicleClass::Class4To6,
            vocation: "box".into(),
            count: 10_000,
        }];
        let a = bootstrap_fleet(&recs, &proj, &s, 42).unwrap();
        let b = bootstrap_fleet(&recs, &proj, &s, 42).unwrap();
        assert_eq!(a, b);

        // chi-square against the uniform law the sampler is meant to follow
        let mut counts = [0usize; 3];
        for v in &a.years[0].vehicles {
            let consumption = v.departure_soc_kwh - v.arrival_soc_kwh;
            let idx = recs
                .iter()
                .position(|r| (r.consumption_kwh() - consumption).abs() < 1e-9)
                .unwrap();
            counts[idx] += 1;
        }
        let expected = 10_000.0 / 3.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // 99.9th percentile of chi-square with 2 degrees of freedom
        assert!(chi2 < 13.82, "chi2 = {chi2}");
        for c in counts {
            assert!((c as f64 / 10_000.0 - 1.0 / 3.0).abs() < 0.02);
        }
    }
}
