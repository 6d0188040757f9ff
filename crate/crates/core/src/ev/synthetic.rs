//! Desk-scale stand-in for a fleet drive survey: daily drives whose start
//! times, durations and distances follow broad depot-based delivery patterns.

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Normal;

use super::bootstrap::Projection;
use super::vehicle::{DriveRecord, MinuteOfDay, VehicleClass};

/// (class, vocation, share of records, mean miles, sd miles)
const STRATA: [(VehicleClass, &str, f64, f64, f64); 6] = [
    (VehicleClass::Class2To3, "parcel", 0.25, 60.0, 20.0),
    (VehicleClass::Class4To6, "parcel", 0.20, 80.0, 25.0),
    (VehicleClass::Class4To6, "utility", 0.10, 50.0, 20.0),
    (VehicleClass::Class7, "beverage", 0.15, 90.0, 30.0),
    (VehicleClass::Class8, "regional", 0.20, 150.0, 50.0),
    (VehicleClass::Class8, "refuse", 0.10, 70.0, 20.0),
];

fn clamp_minutes(hours: f64) -> MinuteOfDay {
    ((hours * 60.0).round() as i64).rem_euclid(1440) as MinuteOfDay
}

/// `n` drive records drawn deterministically from `seed`.
pub fn synthetic_drives(n: usize, seed: u64) -> Vec<DriveRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pick = WeightedIndex::new(STRATA.iter().map(|s| s.2)).expect("positive weights");
    let morning = Normal::new(7.0f64, 1.2).expect("valid");
    let night = Normal::new(21.0f64, 1.0).expect("valid");
    let shift = WeightedIndex::new([0.85, 0.15]).expect("positive weights");
    let duration = Normal::new(9.0f64, 1.5).expect("valid");
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let (class, vocation, _, mean, sd) = STRATA[pick.sample(&mut rng)];
        let start = if shift.sample(&mut rng) == 0 {
            morning.sample(&mut rng)
        } else {
            night.sample(&mut rng)
        };
        let hours = duration.sample(&mut rng).clamp(3.0, 13.0);
        let miles = Normal::new(mean, sd).expect("valid").sample(&mut rng).max(5.0);
        out.push(DriveRecord {
            class,
            vocation: vocation.to_string(),
            start: clamp_minutes(start),
            end: clamp_minutes(start + hours),
            miles,
        });
    }
    out
}

/// Projected counts per stratum, scaling `first_year_total` by `growth` per listed year.
pub fn synthetic_population(years: &[u32], first_year_total: u64, growth: f64) -> Vec<Projection> {
    let mut out = Vec::new();
    for (i, &year) in years.iter().enumerate() {
        let total = first_year_total as f64 * growth.powi(i as i32);
        for (class, vocation, share, _, _) in STRATA {
            out.push(Projection {
                year,
                class,
                vocation: vocation.to_string(),
                count: (total * share).round() as u64,
            });
        }
    }
    out
}
