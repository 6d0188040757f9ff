//! Depot charger counts and costs.

use serde::{Deserialize, Serialize};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChargerPolicy {
    /// One charger per vehicle charging each day.
    Dedicated,
    /// Enough chargers for the peak hourly charging demand.
    PeakShared,
}

impl std::str::FromStr for ChargerPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dedicated" => Ok(ChargerPolicy::Dedicated),
            "peak-shared" | "peak_shared" | "shared" => Ok(ChargerPolicy::PeakShared),
            other => Err(format!("unknown charger policy `{other}` (expected dedicated or peak-shared)")),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChargerPrices {
    /// Hardware and installation per charger ($).
    pub unit_cost: f64,
    /// Bidirectional inverter ($/kW).
    pub inverter_per_kw: f64,
    pub charger_kw: f64,
}

impl Default for ChargerPrices {
    fn default() -> Self {
        ChargerPrices {
            unit_cost: 142_200.0,
            inverter_per_kw: 50.0,
            charger_kw: 150.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChargerCost {
    pub chargers: u64,
    pub hardware: f64,
    pub inverters: f64,
    pub total: f64,
}

/// Chargers needed to serve `peak_mw` at `charger_kw` each, never more than
/// one per vehicle.
pub fn peak_shared_count(vehicles: u64, peak_mw: f64, charger_kw: f64) -> u64 {
    let per_charger = charger_kw / 1000.0;
    let needed = if peak_mw <= 0.0 {
        0
    } else {
        // tolerate round-off on exact multiples
        (peak_mw / per_charger - 1e-9).ceil().max(0.0) as u64
    };
    needed.min(vehicles)
}

pub fn charger_costs(vehicles: u64, peak_mw: f64, policy: ChargerPolicy, v2g: bool, prices: &ChargerPrices) -> ChargerCost {
    let chargers = match policy {
        ChargerPolicy::Dedicated => vehicles,
        ChargerPolicy::PeakShared => peak_shared_count(vehicles, peak_mw, prices.charger_kw),
    };
    let n = chargers as f64;
    let hardware = n * prices.unit_cost;
    let inverters = if v2g { n * prices.inverter_per_kw * prices.charger_kw } else { 0.0 };
    ChargerCost {
        chargers,
        hardware,
        inverters,
        total: hardware + inverters,
    }
}
