//! Truck fleet: drive records, bootstrap sampling, window clustering,
//! baseline charging profiles and the cluster dispatch constraints.

pub mod bootstrap;
pub mod cluster;
pub mod constraints;
pub mod profile;
pub mod synthetic;
pub mod vehicle;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bootstrap::{bootstrap_fleet, Bootstrap, FleetYear, Projection};
pub use cluster::{charge_window, cluster_vehicles, ChargeWindow, ClusterYear, EvCluster, EvFleet, UnmodeledYear};
pub use constraints::{add_ev_constraints, EvBlockVars};
pub use profile::{fixed_profile, immediate_profile};
pub use vehicle::{parse_hhmm, DriveRecord, MinuteOfDay, Vehicle, VehicleClass, VehicleSpec};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChargingRegime {
    /// Baseline profiles injected as load.
    Fixed,
    /// Controlled charging, no export.
    V1g,
    /// Controlled charging and discharging.
    V2g,
}

impl ChargingRegime {
    pub const ALL: [ChargingRegime; 3] = [ChargingRegime::Fixed, ChargingRegime::V1g, ChargingRegime::V2g];
}

impl fmt::Display for ChargingRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChargingRegime::Fixed => "fixed",
            ChargingRegime::V1g => "v1g",
            ChargingRegime::V2g => "v2g",
        })
    }
}

impl FromStr for ChargingRegime {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "fixed" => Ok(ChargingRegime::Fixed),
            "v1g" => Ok(ChargingRegime::V1g),
            "v2g" => Ok(ChargingRegime::V2g),
            other => Err(format!("unknown charging regime `{other}` (expected fixed, v1g or v2g)")),
        }
    }
}

/// How discharge power enters the cluster SoC recursion.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DischargeConvention {
    /// `C(t+1) = C(t) + ηc·pc − ηd·pd`
    #[default]
    Multiply,
    /// `C(t+1) = C(t) + ηc·pc − pd/ηd`, as for stationary storage.
    Divide,
}

impl DischargeConvention {
    /// SoC change per MW of discharge.
    pub fn discharge_factor(self, eta_discharge: f64) -> f64 {
        match self {
            DischargeConvention::Multiply => eta_discharge,
            DischargeConvention::Divide => 1.0 / eta_discharge,
        }
    }
}

/// Fleet-wide assumptions, read from the `ev` section of `system.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvSettings {
    /// Zone id hosting the depots; the policy zone when empty.
    pub zone: String,
    pub eta_charge: f64,
    pub eta_discharge: f64,
    /// Minimum SoC as a fraction of pack size.
    pub soc_min_fraction: f64,
    /// SoC at departure as a fraction of pack size.
    pub soc_drive_fraction: f64,
    /// Windows holding a smaller share of the fleet stay on fixed charging.
    pub cluster_threshold: f64,
    pub discharge_convention: DischargeConvention,
    pub charger_kw: f64,
}

impl Default for EvSettings {
    fn default() -> Self {
        EvSettings {
            zone: String::new(),
            eta_charge: 0.95,
            eta_discharge: 0.95,
            soc_min_fraction: 0.0,
            soc_drive_fraction: 1.0,
            cluster_threshold: 0.001,
            discharge_convention: DischargeConvention::Multiply,
            charger_kw: 150.0,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum EvError {
    #[error("no drive records for class {class} vocation `{vocation}` but {year} projects vehicles in it")]
    EmptyStratum {
        year: u32,
        class: VehicleClass,
        vocation: String,
    },
    #[error("cluster {cluster}: needs {energy_mwh:.6} MWh but can draw at most {limit_mwh:.6} MWh in its window")]
    InfeasibleCharge {
        cluster: String,
        energy_mwh: f64,
        limit_mwh: f64,
    },
    #[error("cluster {cluster} year {year}: pinned SoC {value:.6} MWh lies outside [{min:.6}, {max:.6}]")]
    PinOutOfBounds {
        cluster: String,
        year: u32,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("dispatch periods of {0} hours are not whole days")]
    PartialDays(usize),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regime_parsing() {
        for r in ChargingRegime::ALL {
            assert_eq!(r.to_string().parse::<ChargingRegime>(), Ok(r));
        }
        assert!("v3g".parse::<ChargingRegime>().is_err());
    }

    #[test]
    fn discharge_factors() {
        assert_eq!(DischargeConvention::Multiply.discharge_factor(0.9), 0.9);
        assert!((DischargeConvention::Divide.discharge_factor(0.9) - 1.0 / 0.9).abs() < 1e-15);
    }
}
