use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Medium- and heavy-duty truck weight class.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VehicleClass {
    #[serde(rename = "2-3")]
    Class2To3,
    #[serde(rename = "4-6")]
    Class4To6,
    #[serde(rename = "7")]
    Class7,
    #[serde(rename = "8")]
    Class8,
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VehicleSpec {
    pub charger_kw: f64,
    pub capacity_kwh: f64,
    pub efficiency_kwh_per_mile: f64,
}

impl VehicleClass {
    pub const ALL: [VehicleClass; 4] = [
        VehicleClass::Class2To3,
        VehicleClass::Class4To6,
        VehicleClass::Class7,
        VehicleClass::Class8,
    ];

    /// Charger rating, pack size and driving efficiency assumed for the class.
    pub fn spec(self) -> VehicleSpec {
        let (capacity_kwh, efficiency_kwh_per_mile) = match self {
            VehicleClass::Class2To3 => (100.0, 0.6),
            VehicleClass::Class4To6 => (300.0, 1.05),
            VehicleClass::Class7 => (400.0, 1.1),
            VehicleClass::Class8 => (600.0, 1.8),
        };
        VehicleSpec {
            charger_kw: 150.0,
            capacity_kwh,
            efficiency_kwh_per_mile,
        }
    }
}

impl fmt::Display for VehicleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VehicleClass::Class2To3 => "2-3",
            VehicleClass::Class4To6 => "4-6",
            VehicleClass::Class7 => "7",
            VehicleClass::Class8 => "8",
        })
    }
}

impl FromStr for VehicleClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "2-3" | "2b-3" => Ok(VehicleClass::Class2To3),
            "4-6" => Ok(VehicleClass::Class4To6),
            "7" => Ok(VehicleClass::Class7),
            "8" => Ok(VehicleClass::Class8),
            other => Err(format!("unknown vehicle class `{other}`")),
        }
    }
}

/// Minutes since midnight.
pub type MinuteOfDay = u16;

/// Parses `HHMM` or `HH:MM`.
pub fn parse_hhmm(s: &str) -> Result<MinuteOfDay, String> {
    let digits: String = s.trim().chars().filter(|c| *c != ':').collect();
    if digits.is_empty() || digits.len() > 4 || !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(format!("malformed time `{s}`"));
    }
    let n: u16 = digits.parse().map_err(|_| format!("malformed time `{s}`"))?;
    let (h, m) = (n / 100, n % 100);
    if h > 23 || m > 59 {
        return Err(format!("time `{s}` is outside the day"));
    }
    Ok(h * 60 + m)
}

/// One observed daily drive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriveRecord {
    pub class: VehicleClass,
    pub vocation: String,
    /// Depot departure.
    pub start: MinuteOfDay,
    /// Depot arrival.
    pub end: MinuteOfDay,
    pub miles: f64,
}

impl DriveRecord {
    pub fn consumption_kwh(&self) -> f64 {
        self.miles * self.class.spec().efficiency_kwh_per_mile
    }
}

/// A sampled vehicle with its daily energy need, all in kW/kWh.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Vehicle {
    pub class: VehicleClass,
    pub vocation: String,
    pub depot_arrival: MinuteOfDay,
    pub depot_departure: MinuteOfDay,
    pub charger_kw: f64,
    pub capacity_kwh: f64,
    pub min_soc_kwh: f64,
    /// SoC on arrival at the depot.
    pub arrival_soc_kwh: f64,
    /// SoC required at departure.
    pub departure_soc_kwh: f64,
}

impl Vehicle {
    /// Grid-side energy needed per day.
    pub fn grid_energy_kwh(&self, eta_charge: f64) -> f64 {
        (self.departure_soc_kwh - self.arrival_soc_kwh) / eta_charge
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class8_hundred_miles() {
        let r = DriveRecord {
            class: VehicleClass::Class8,
            vocation: "tractor".into(),
            start: 360,
            end: 1100,
            miles: 100.0,
        };
        assert!((r.consumption_kwh() - 180.0).abs() < 1e-9);
        assert_eq!(VehicleClass::Class8.spec().capacity_kwh - r.consumption_kwh(), 420.0);
    }

    #[test]
    fn hhmm_parsing() {
        assert_eq!(parse_hhmm("1820"), Ok(18 * 60 + 20));
        assert_eq!(parse_hhmm("06:40"), Ok(400));
        assert_eq!(parse_hhmm("640"), Ok(400));
        assert!(parse_hhmm("2460").is_err());
        assert!(parse_hhmm("x").is_err());
    }

    #[test]
    fn all_classes_share_the_charger_rating() {
        for c in VehicleClass::ALL {
            assert_eq!(c.spec().charger_kw, 150.0);
            assert_eq!(c.to_string().parse::<VehicleClass>(), Ok(c));
        }
    }
}
