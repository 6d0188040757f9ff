//! Static planning world: zones, lines, the generation fleet and policy inputs.
//!
//! Units: power in MW, energy in MWh, money in 2025 dollars, emissions in
//! metric tons. Per-hour series are flattened with [`TimeGrid::slot`] (loads)
//! or `period * hours + hour` (production factors).

use serde::{Deserialize, Serialize};

use super::time::TimeGrid;
use crate::ev::EvSettings;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Zone {
    pub id: String,
    /// Zone subject to emissions, RPS and PRM constraints and the only one
    /// where new resources may be built.
    pub policy_zone: bool,
    /// MW per (year, period, hour) slot.
    pub load: Vec<f64>,
}

impl Zone {
    pub fn peak_load(&self) -> f64 {
        self.load.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub id: String,
    /// (zone index, ±1): +1 for the zone the reference direction flows into.
    pub incidence: Vec<(usize, i8)>,
    pub limit_mw: f64,
    /// $/MWh charged on the absolute flow.
    pub wheeling_cost: f64,
    /// ton/MWh attributed to energy imported into the policy zone.
    pub import_emission_rate: f64,
}

impl Line {
    pub fn lambda(&self, zone: usize) -> f64 {
        self.incidence
            .iter()
            .find(|&&(z, _)| z == zone)
            .map_or(0.0, |&(_, s)| f64::from(s))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitStatus {
    Existing,
    Candidate,
}

/// Economic data shared by every resource class.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Economics {
    /// Overnight capital ($/unit for thermal, $/MW for power, $/MWh for energy).
    pub capital: f64,
    /// Yearly maintenance in the same denominator as `capital`.
    pub maintenance: f64,
    pub lifetime_years: f64,
}

impl Economics {
    /// Capital recovery factor for `rate` and the configured lifetime.
    pub fn annualized_capital(&self, rate: f64) -> f64 {
        if self.capital == 0.0 {
            return 0.0;
        }
        self.capital * capital_recovery_factor(rate, self.lifetime_years)
    }
}

pub fn capital_recovery_factor(rate: f64, lifetime_years: f64) -> f64 {
    if lifetime_years <= 0.0 {
        return 1.0;
    }
    if rate.abs() < 1e-12 {
        return 1.0 / lifetime_years;
    }
    let g = (1.0 + rate).powf(lifetime_years);
    rate * g / (g - 1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermalUnit {
    pub id: String,
    pub zone: usize,
    pub p_max: f64,
    pub p_min: f64,
    pub ramp_up: f64,
    pub ramp_down: f64,
    pub min_up_hours: usize,
    pub min_down_hours: usize,
    pub startup_cost: f64,
    pub shutdown_cost: f64,
    /// $/MWh
    pub cost_slope: f64,
    /// $/h while committed
    pub cost_intercept: f64,
    /// ton/MWh
    pub emission_slope: f64,
    /// ton/h while committed
    pub emission_intercept: f64,
    pub nqc: f64,
    pub status: UnitStatus,
    pub retirable: bool,
    pub planned_from: Option<u32>,
    pub planned_until: Option<u32>,
    pub economics: Economics,
}

impl ThermalUnit {
    /// Exogenous operational status in `year` (always 0 for candidates).
    pub fn planned_status(&self, year: u32) -> bool {
        if self.status == UnitStatus::Candidate {
            return false;
        }
        self.planned_from.map_or(true, |f| year >= f)
            && self.planned_until.map_or(true, |u| year <= u)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RenewableKind {
    Solar,
    Wind,
    Firm,
    Other,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenewableResource {
    pub id: String,
    pub zone: usize,
    pub kind: RenewableKind,
    /// Production factor per `period * hours + hour`, in [0, 1].
    pub production: Vec<f64>,
    pub curtailable: bool,
    pub rps_eligible: bool,
    pub curtail_cost: f64,
    /// Planned installed MW per investment year.
    pub planned_mw: Vec<f64>,
    pub candidate: bool,
    pub max_build_mw: f64,
    pub economics: Economics,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StorageResource {
    pub id: String,
    pub zone: usize,
    pub planned_mw: Vec<f64>,
    pub planned_mwh: Vec<f64>,
    pub eta_charge: f64,
    pub eta_discharge: f64,
    /// Fraction of stored energy lost per hour.
    pub self_discharge: f64,
    /// Usable ceiling as a fraction of energy capacity.
    pub soc_max_fraction: f64,
    /// Reserved floor as a fraction of energy capacity.
    pub soc_min_fraction: f64,
    pub min_charge_hours: usize,
    pub min_discharge_hours: usize,
    pub candidate: bool,
    pub max_build_mw: f64,
    pub max_build_mwh: f64,
    /// Allows retiring planned energy capacity.
    pub energy_retirement: bool,
    pub power_economics: Economics,
    pub energy_economics: Economics,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HydroUnit {
    pub id: String,
    pub zone: usize,
    pub p_max: f64,
    pub p_min: f64,
    pub ramp_up: f64,
    pub ramp_down: f64,
    /// MWh available per representative period.
    pub budget_mwh: f64,
    pub nqc: f64,
    /// $/MW-yr on `p_max`.
    pub maintenance: f64,
}

/// One supporting hyperplane of a capacity-credit surface:
/// credit ≤ intercept + wind·W + solar·S + storage·B.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElccPlane {
    pub intercept: f64,
    pub wind_slope: f64,
    pub solar_slope: f64,
    pub storage_slope: f64,
}

impl ElccPlane {
    pub fn eval(&self, wind: f64, solar: f64, storage: f64) -> f64 {
        self.intercept + self.wind_slope * wind + self.solar_slope * solar + self.storage_slope * storage
    }
}

/// Concave piecewise-linear credit, the pointwise minimum of its planes.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ElccSurface {
    pub planes: Vec<ElccPlane>,
}

impl ElccSurface {
    pub fn credit(&self, wind: f64, solar: f64, storage: f64) -> f64 {
        self.planes
            .iter()
            .map(|p| p.eval(wind, solar, storage))
            .fold(f64::INFINITY, f64::min)
            .max(0.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolicyYear {
    /// ton/yr
    pub emissions_cap: f64,
    /// Fraction of policy-zone load served by eligible renewables.
    pub rps: f64,
    /// MW of qualifying capacity required.
    pub prm: f64,
    pub vre_elcc: ElccSurface,
    pub storage_elcc: ElccSurface,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemData {
    pub name: String,
    pub grid: TimeGrid,
    pub discount_rate: f64,
    pub zones: Vec<Zone>,
    pub lines: Vec<Line>,
    pub thermal: Vec<ThermalUnit>,
    pub renewables: Vec<RenewableResource>,
    pub storage: Vec<StorageResource>,
    pub hydro: Vec<HydroUnit>,
    /// One entry per investment year.
    pub policy: Vec<PolicyYear>,
    pub ev: EvSettings,
}

impl SystemData {
    pub fn policy_zone(&self) -> usize {
        self.zones
            .iter()
            .position(|z| z.policy_zone)
            .unwrap_or(0)
    }

    pub fn zone_index(&self, id: &str) -> Option<usize> {
        self.zones.iter().position(|z| z.id == id)
    }

    pub fn load(&self, zone: usize, year: usize, period: usize, hour: usize) -> f64 {
        self.zones[zone].load[self.grid.slot(year, period, hour)]
    }

    /// Weighted yearly energy demand of a zone.
    pub fn annual_load(&self, zone: usize, year: usize) -> f64 {
        let g = &self.grid;
        (0..g.num_periods())
            .map(|w| {
                let s: f64 = (0..g.hours()).map(|t| self.load(zone, year, w, t)).sum();
                g.periods[w].weight * s
            })
            .sum()
    }
}
