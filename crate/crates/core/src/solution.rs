//! Solved plan in reporting form.

use serde::{Deserialize, Serialize};

use crate::ev::{ChargingRegime, EvFleet};
use crate::lp::{SolveStatus, VarId};
use crate::model::SystemData;
use crate::plan::{PlanningModel, YearCosts};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstalledCapacity {
    pub year: u32,
    pub resource: String,
    /// `thermal`, `solar`, `wind`, `firm`, `other`, `storage_power`, `storage_energy` or `hydro`.
    pub kind: String,
    pub zone: String,
    /// MW, or MWh for storage energy.
    pub capacity: f64,
    /// Amount added by the plan in this year.
    pub built: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HourlyRow {
    pub year: u32,
    pub period: String,
    pub hour: usize,
    pub zone: String,
    pub load: f64,
    pub thermal: f64,
    pub renewable: f64,
    pub curtailed: f64,
    pub storage_net: f64,
    pub hydro: f64,
    /// Net flow into the zone.
    pub net_import: f64,
    pub ev_charge: f64,
    pub ev_discharge: f64,
    /// Charging of vehicles outside the controllable clusters.
    pub ev_unmodeled: f64,
    /// Load plus net EV charging.
    pub gross_load: f64,
    /// Gross load minus renewable output.
    pub net_load: f64,
}

/// Cluster-total SoC per day of one block, `soc[d][k]` after `k` window hours.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvSocSeries {
    pub cluster: String,
    pub year: u32,
    pub period: String,
    pub period_weight: f64,
    pub vehicles: usize,
    pub soc: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolicyOutcome {
    pub year: u32,
    pub emissions: f64,
    pub emissions_cap: f64,
    pub rps_share: f64,
    pub rps_target: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FleetYearSummary {
    pub year: u32,
    pub modeled_vehicles: usize,
    pub total_vehicles: usize,
    /// Weighted yearly EV grid energy (MWh).
    pub ev_energy_mwh: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanSolution {
    pub scenario: String,
    pub regime: ChargingRegime,
    /// `monolithic` or `slr`.
    pub method: String,
    pub status: SolveStatus,
    pub objective: f64,
    pub dual_bound: f64,
    pub gap: f64,
    pub seconds: f64,
    pub years: Vec<u32>,
    pub costs: Vec<YearCosts>,
    pub installed: Vec<InstalledCapacity>,
    pub policy: Vec<PolicyOutcome>,
    pub fleet: Vec<FleetYearSummary>,
    pub ev_soc: Vec<EvSocSeries>,
    pub hourly: Vec<HourlyRow>,
}

/// Solver-side facts attached to a solution.
#[derive(Clone, Debug)]
pub struct SolveMeta {
    pub method: String,
    pub status: SolveStatus,
    pub objective: f64,
    pub dual_bound: f64,
    pub seconds: f64,
}

fn val(values: &[f64], v: VarId) -> f64 {
    values[v.index()]
}

fn opt(values: &[f64], v: Option<VarId>) -> f64 {
    v.map_or(0.0, |v| values[v.index()])
}

/// Drops solver noise around zero (and the sign of `-0.0`).
fn snap(x: f64) -> f64 {
    if x.abs() < 1e-7 {
        0.0
    } else {
        x
    }
}

impl PlanSolution {
    /// Extracts the reporting view of `values` for `plan`.
    pub fn from_values(sys: &SystemData, fleet: &EvFleet, plan: &PlanningModel, values: &[f64], meta: SolveMeta) -> Self {
        let g = &sys.grid;
        let years = g.years.clone();
        let costs = plan.cost_ledger(&years, values);
        let gap = if meta.objective.abs() > 0.0 {
            ((meta.objective - meta.dual_bound) / meta.objective.abs()).max(0.0)
        } else {
            0.0
        };
        PlanSolution {
            scenario: sys.name.clone(),
            regime: plan.regime,
            method: meta.method,
            status: meta.status,
            objective: meta.objective,
            dual_bound: meta.dual_bound,
            gap,
            seconds: meta.seconds,
            installed: installed(sys, plan, values),
            policy: policy(sys, plan, values),
            fleet: fleet_summary(sys, fleet, plan, values),
            ev_soc: ev_soc(sys, fleet, plan, values),
            hourly: hourly(sys, fleet, plan, values),
            years,
            costs,
        }
    }

    pub fn total_cost(&self) -> f64 {
        self.costs.iter().map(YearCosts::total).sum()
    }

    pub fn capacity(&self, year: u32, kind: &str) -> f64 {
        self.installed
            .iter()
            .filter(|c| c.year == year && c.kind == kind)
            .map(|c| c.capacity)
            .sum()
    }
}

fn installed(sys: &SystemData, plan: &PlanningModel, values: &[f64]) -> Vec<InstalledCapacity> {
    let g = &sys.grid;
    let inv = &plan.investment;
    let mut out = Vec::new();
    let zone = |z: usize| sys.zones[z].id.clone();
    for (y, &year) in g.years.iter().enumerate() {
        for (u, ti) in sys.thermal.iter().zip(&inv.thermal) {
            let on = match ti.status[y] {
                crate::uc::StatusLink::Fixed(b) => f64::from(u8::from(b)),
                crate::uc::StatusLink::Var(v) => val(values, v).round(),
            };
            out.push(InstalledCapacity {
                year,
                resource: u.id.clone(),
                kind: "thermal".into(),
                zone: zone(u.zone),
                capacity: on * u.p_max,
                built: opt(values, ti.build[y]).round() * u.p_max,
            });
        }
        for (r, c) in sys.renewables.iter().zip(&inv.renewable) {
            out.push(InstalledCapacity {
                year,
                resource: r.id.clone(),
                kind: format!("{:?}", r.kind).to_lowercase(),
                zone: zone(r.zone),
                capacity: snap(c.installed[y].eval(values)),
                built: snap(opt(values, c.build[y])),
            });
        }
        for (i, s) in sys.storage.iter().enumerate() {
            for (c, kind) in [(&inv.storage_power[i], "storage_power"), (&inv.storage_energy[i], "storage_energy")] {
                out.push(InstalledCapacity {
                    year,
                    resource: s.id.clone(),
                    kind: kind.into(),
                    zone: zone(s.zone),
                    capacity: snap(c.installed[y].eval(values)),
                    built: snap(opt(values, c.build[y])),
                });
            }
        }
        for h in &sys.hydro {
            out.push(InstalledCapacity {
                year,
                resource: h.id.clone(),
                kind: "hydro".into(),
                zone: zone(h.zone),
                capacity: h.p_max,
                built: 0.0,
            });
        }
    }
    out
}

fn policy(sys: &SystemData, plan: &PlanningModel, values: &[f64]) -> Vec<PolicyOutcome> {
    let g = &sys.grid;
    let pz = sys.policy_zone();
    (0..g.num_years())
        .map(|y| {
            let mut emissions = 0.0;
            let mut rps = 0.0;
            for b in plan.blocks.iter().filter(|b| b.key.year == y) {
                let w = g.periods[b.key.period].weight;
                emissions += w * b.emissions.eval(values);
                rps += w * b.rps_energy.eval(values);
            }
            let load = sys.annual_load(pz, y);
            PolicyOutcome {
                year: g.years[y],
                emissions,
                emissions_cap: sys.policy[y].emissions_cap,
                rps_share: if load > 0.0 { rps / load } else { 0.0 },
                rps_target: sys.policy[y].rps,
            }
        })
        .collect()
}

fn fleet_summary(sys: &SystemData, fleet: &EvFleet, plan: &PlanningModel, values: &[f64]) -> Vec<FleetYearSummary> {
    let g = &sys.grid;
    (0..g.num_years())
        .map(|y| {
            let mut energy = 0.0;
            for b in plan.blocks.iter().filter(|b| b.key.year == y) {
                let w = g.periods[b.key.period].weight;
                for t in 0..g.hours() {
                    let mut e = fleet.unmodeled[y].profile[t % 24];
                    for v in b.ev.iter().flatten() {
                        e += v.net_charge(t).eval(values);
                    }
                    energy += w * e;
                }
            }
            FleetYearSummary {
                year: g.years[y],
                modeled_vehicles: fleet.modeled_vehicles(y),
                total_vehicles: fleet.total_vehicles(y),
                ev_energy_mwh: energy,
            }
        })
        .collect()
}

fn ev_soc(sys: &SystemData, fleet: &EvFleet, plan: &PlanningModel, values: &[f64]) -> Vec<EvSocSeries> {
    let g = &sys.grid;
    let days = g.days_per_period();
    let mut out = Vec::new();
    for b in &plan.blocks {
        for (ci, c) in fleet.clusters.iter().enumerate() {
            let cy = &c.years[b.key.year];
            let Some(vars) = &b.ev[ci] else { continue };
            let soc = if plan.regime == ChargingRegime::Fixed {
                // SoC implied by the fixed profile, identical every day
                let mut day = Vec::with_capacity(c.window.length + 1);
                let mut level = cy.c_depot_mwh;
                day.push(level);
                for h in c.window.hours() {
                    level += c.eta_charge * cy.fixed_profile[h];
                    day.push(level);
                }
                vec![day; days]
            } else {
                vars.soc
                    .iter()
                    .map(|d| d.iter().map(|&v| val(values, v)).collect())
                    .collect()
            };
            out.push(EvSocSeries {
                cluster: c.id.clone(),
                year: g.years[b.key.year],
                period: g.periods[b.key.period].id.clone(),
                period_weight: g.periods[b.key.period].weight,
                vehicles: cy.vehicles,
                soc,
            });
        }
    }
    out
}

fn hourly(sys: &SystemData, fleet: &EvFleet, plan: &PlanningModel, values: &[f64]) -> Vec<HourlyRow> {
    let g = &sys.grid;
    let n = g.hours();
    let mut out = Vec::with_capacity(g.num_slots() * sys.zones.len());
    for b in &plan.blocks {
        let (y, w) = (b.key.year, b.key.period);
        for (z, zone) in sys.zones.iter().enumerate() {
            for t in 0..n {
                let thermal: f64 = sys
                    .thermal
                    .iter()
                    .zip(&b.thermal)
                    .filter(|(u, _)| u.zone == z)
                    .map(|(_, tv)| val(values, tv.gen[t]))
                    .sum();
                let mut renewable = 0.0;
                let mut curtailed = 0.0;
                for (r, rv) in sys.renewables.iter().zip(&b.renewable) {
                    if r.zone == z {
                        renewable += rv.output[t].eval(values);
                        curtailed += opt(values, rv.curtail[t]);
                    }
                }
                let storage_net: f64 = sys
                    .storage
                    .iter()
                    .zip(&b.storage)
                    .filter(|(s, _)| s.zone == z)
                    .filter_map(|(_, sv)| sv.as_ref())
                    .map(|sv| val(values, sv.discharge[t]) - val(values, sv.charge[t]))
                    .sum();
                let hydro: f64 = sys
                    .hydro
                    .iter()
                    .zip(&b.hydro)
                    .filter(|(h, _)| h.zone == z)
                    .map(|(_, p)| val(values, p[t]))
                    .sum();
                let mut net_import = 0.0;
                for (l, lv) in sys.lines.iter().zip(&b.lines) {
                    let lambda = l.lambda(z);
                    if lambda != 0.0 {
                        net_import += lambda * lv.flow(t).eval(values);
                    }
                }
                let mut ev_charge = 0.0;
                let mut ev_discharge = 0.0;
                let mut ev_unmodeled = 0.0;
                if z == fleet.zone {
                    ev_unmodeled = fleet.unmodeled[y].profile[t % 24];
                }
                for (c, v) in fleet.clusters.iter().zip(&b.ev) {
                    if c.zone != z {
                        continue;
                    }
                    if let Some(v) = v {
                        ev_charge += v.fixed_load[t] + opt(values, v.charge[t]);
                        ev_discharge += opt(values, v.discharge[t]);
                    }
                }
                let load = sys.load(z, y, w, t);
                let gross_load = load + ev_charge - ev_discharge + ev_unmodeled;
                out.push(HourlyRow {
                    year: g.years[y],
                    period: g.periods[w].id.clone(),
                    hour: t,
                    zone: zone.id.clone(),
                    load,
                    thermal,
                    renewable,
                    curtailed,
                    storage_net,
                    hydro,
                    net_import,
                    ev_charge,
                    ev_discharge,
                    ev_unmodeled,
                    gross_load,
                    net_load: gross_load - renewable,
                });
            }
        }
    }
    out
}
