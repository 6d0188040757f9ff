//! Scenario directory reader and cluster file writer.
//!
//! Every CSV has a fixed header; unknown or missing columns are rejected.
//! Hours are 0-based within a representative period.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::{DeserializeOwned, Deserializer};
use serde::{Deserialize, Serialize};

use super::system::*;
use super::time::TimeGrid;
use crate::error::ScenarioError;
use crate::ev::{
    parse_hhmm, ChargeWindow, ClusterYear, DriveRecord, EvCluster, EvFleet, EvSettings, Projection,
    UnmodeledYear, VehicleClass,
};

/// Where the truck fleet of a scenario comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum FleetSource {
    None,
    /// Drive records and population projections, bootstrapped per run.
    Drives {
        records: Vec<DriveRecord>,
        projections: Vec<Projection>,
    },
    /// Cluster parameters and baseline profiles read as given.
    Clusters(EvFleet),
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub dir: PathBuf,
    pub system: SystemData,
    pub fleet: FleetSource,
    /// Zone index hosting the truck depots.
    pub ev_zone: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ZoneSpec {
    id: String,
    #[serde(default)]
    policy_zone: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemFile {
    name: String,
    zones: Vec<ZoneSpec>,
    time_grid: TimeGrid,
    discount_rate: f64,
    #[serde(default)]
    ev: EvSettings,
}

fn flag<'de, D: Deserializer<'de>>(d: D) -> Result<bool, D::Error> {
    let s = String::deserialize(d)?;
    match s.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "y" => Ok(true),
        "0" | "false" | "no" | "n" | "" => Ok(false),
        other => Err(serde::de::Error::custom(format!("`{other}` is not a boolean"))),
    }
}

#[derive(Deserialize)]
struct PolicyRow {
    year: u32,
    emissions_cap: f64,
    rps: f64,
    prm: f64,
}

#[derive(Deserialize)]
struct ThermalRow {
    id: String,
    zone: String,
    p_max: f64,
    p_min: f64,
    ramp_up: f64,
    ramp_down: f64,
    min_up: usize,
    min_down: usize,
    startup_cost: f64,
    shutdown_cost: f64,
    cost_slope: f64,
    cost_intercept: f64,
    emis_slope: f64,
    emis_intercept: f64,
    nqc: f64,
    status: UnitStatus,
    #[serde(deserialize_with = "flag")]
    retirable: bool,
    planned_from: Option<u32>,
    planned_until: Option<u32>,
}

#[derive(Deserialize)]
struct RenewableRow {
    id: String,
    zone: String,
    kind: RenewableKind,
    #[serde(deserialize_with = "flag")]
    curtailable: bool,
    #[serde(deserialize_with = "flag")]
    rps_eligible: bool,
    curtail_cost: f64,
    planned_mw: f64,
    #[serde(deserialize_with = "flag")]
    candidate: bool,
    max_build_mw: f64,
}

#[derive(Deserialize)]
struct ProductionRow {
    resource: String,
    period: String,
    hour: usize,
    factor: f64,
}

#[derive(Deserialize)]
struct StorageRow {
    id: String,
    zone: String,
    planned_mw: f64,
    planned_mwh: f64,
    eta_charge: f64,
    eta_discharge: f64,
    self_discharge: f64,
    soc_max_fraction: f64,
    soc_min_fraction: f64,
    min_charge_hours: usize,
    min_discharge_hours: usize,
    #[serde(deserialize_with = "flag")]
    candidate: bool,
    max_build_mw: f64,
    max_build_mwh: f64,
    #[serde(deserialize_with = "flag")]
    energy_retirement: bool,
}

#[derive(Deserialize)]
struct HydroRow {
    id: String,
    zone: String,
    p_max: f64,
    p_min: f64,
    ramp_up: f64,
    ramp_down: f64,
    budget_mwh: f64,
    nqc: f64,
}

#[derive(Deserialize)]
struct LineRow {
    id: String,
    from: String,
    to: String,
    limit_mw: f64,
    wheeling_cost: f64,
    import_emission_rate: f64,
}

#[derive(Deserialize)]
struct LoadRow {
    zone: String,
    year: u32,
    period: String,
    hour: usize,
    mw: f64,
}

#[derive(Deserialize)]
struct ElccRow {
    surface: String,
    year: u32,
    intercept: f64,
    wind_slope: f64,
    solar_slope: f64,
    storage_slope: f64,
}

#[derive(Deserialize)]
struct CostRow {
    resource: String,
    component: String,
    capital: f64,
    maintenance: f64,
    lifetime: f64,
}

#[derive(Deserialize)]
struct PlannedRow {
    resource: String,
    year: u32,
    mw: f64,
    mwh: Option<f64>,
}

#[derive(Deserialize)]
struct DriveRow {
    class: String,
    vocation: String,
    start_hhmm: String,
    end_hhmm: String,
    miles: f64,
}

#[derive(Deserialize)]
struct PopulationRow {
    year: u32,
    class: String,
    vocation: String,
    count: u64,
}

/// Row of `clusters.csv`; the `unmodeled` pseudo-cluster has no window.
#[derive(Debug, Serialize, Deserialize)]
struct ClusterRow {
    cluster: String,
    zone: String,
    year: u32,
    regime: Option<String>,
    depot_hour: Option<usize>,
    drive_hour: Option<usize>,
    time_wrap: Option<usize>,
    vehicles: usize,
    p_max_mw: f64,
    c_max_mwh: f64,
    c_min_mwh: f64,
    c_depot_mwh: f64,
    c_drive_mwh: f64,
    eta_charge: f64,
    eta_discharge: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct ProfileRow {
    cluster: String,
    year: u32,
    hour: usize,
    mw: f64,
}

const UNMODELED: &str = "unmodeled";

struct Table<T> {
    path: PathBuf,
    rows: Vec<(u64, T)>,
}

fn read_table<T: DeserializeOwned>(
    dir: &Path,
    name: &str,
    required: &[&str],
    optional: &[&str],
) -> Result<Table<T>, ScenarioError> {
    let path = dir.join(name);
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(&path)
        .map_err(|e| ScenarioError::new(&path, None, e.to_string()))?;
    let headers = rdr
        .headers()
        .map_err(|e| ScenarioError::new(&path, Some(0), e.to_string()))?
        .clone();
    let mut seen = HashSet::new();
    for h in headers.iter() {
        if !required.contains(&h) && !optional.contains(&h) {
            return Err(ScenarioError::new(&path, Some(0), format!("unknown column `{h}`")));
        }
        if !seen.insert(h.to_string()) {
            return Err(ScenarioError::new(&path, Some(0), format!("duplicate column `{h}`")));
        }
    }
    for r in required {
        if !seen.contains(*r) {
            return Err(ScenarioError::new(&path, Some(0), format!("missing column `{r}`")));
        }
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i as u64 + 1;
        let rec = rec.map_err(|e| ScenarioError::new(&path, Some(row), e.to_string()))?;
        let value: T = rec
            .deserialize(Some(&headers))
            .map_err(|e| ScenarioError::new(&path, Some(row), e.to_string()))?;
        rows.push((row, value));
    }
    Ok(Table { path, rows })
}

fn optional_table<T: DeserializeOwned>(
    dir: &Path,
    name: &str,
    required: &[&str],
    optional: &[&str],
) -> Result<Option<Table<T>>, ScenarioError> {
    if dir.join(name).exists() {
        read_table(dir, name, required, optional).map(Some)
    } else {
        Ok(None)
    }
}

struct Ctx<'a> {
    zones: &'a [ZoneSpec],
    grid: &'a TimeGrid,
}

impl Ctx<'_> {
    fn zone(&self, path: &Path, row: u64, id: &str) -> Result<usize, ScenarioError> {
        self.zones
            .iter()
            .position(|z| z.id == id)
            .ok_or_else(|| ScenarioError::new(path, Some(row), format!("unknown zone `{id}`")))
    }

    fn year(&self, path: &Path, row: u64, year: u32) -> Result<usize, ScenarioError> {
        self.grid
            .year_index(year)
            .ok_or_else(|| ScenarioError::new(path, Some(row), format!("year {year} is not an investment year")))
    }

    fn period(&self, path: &Path, row: u64, id: &str) -> Result<usize, ScenarioError> {
        self.grid
            .period_index(id)
            .ok_or_else(|| ScenarioError::new(path, Some(row), format!("unknown period `{id}`")))
    }

    fn hour(&self, path: &Path, row: u64, hour: usize) -> Result<usize, ScenarioError> {
        if hour < self.grid.hours() {
            Ok(hour)
        } else {
            Err(ScenarioError::new(
                path,
                Some(row),
                format!("hour {hour} outside 0..{}", self.grid.hours()),
            ))
        }
    }
}

fn unique_ids<'a>(path: &Path, ids: impl Iterator<Item = (u64, &'a str)>, seen: &mut HashSet<String>) -> Result<(), ScenarioError> {
    for (row, id) in ids {
        if !seen.insert(id.to_string()) {
            return Err(ScenarioError::new(path, Some(row), format!("duplicate resource id `{id}`")));
        }
    }
    Ok(())
}

/// Reads a scenario directory. The result is not validated; see
/// [`crate::model::validate_system`].
pub fn load_scenario(dir: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
    let dir = dir.as_ref();
    let sys_path = dir.join("system.json");
    let text = fs::read_to_string(&sys_path).map_err(|e| ScenarioError::new(&sys_path, None, e.to_string()))?;
    let file: SystemFile =
        serde_json::from_str(&text).map_err(|e| ScenarioError::new(&sys_path, Some(e.line() as u64), e.to_string()))?;
    let ctx = Ctx {
        zones: &file.zones,
        grid: &file.time_grid,
    };
    let g = &file.time_grid;
    let ny = g.num_years();
    let nprod = g.num_periods() * g.hours();

    // policy and capacity credit
    let policy_t: Table<PolicyRow> = read_table(dir, "policy.csv", &["year", "emissions_cap", "rps", "prm"], &[])?;
    let mut policy: Vec<Option<PolicyYear>> = vec![None; ny];
    for (row, p) in &policy_t.rows {
        let y = ctx.year(&policy_t.path, *row, p.year)?;
        if policy[y].is_some() {
            return Err(ScenarioError::new(&policy_t.path, Some(*row), format!("duplicate year {}", p.year)));
        }
        policy[y] = Some(PolicyYear {
            emissions_cap: p.emissions_cap,
            rps: p.rps,
            prm: p.prm,
            vre_elcc: ElccSurface::default(),
            storage_elcc: ElccSurface::default(),
        });
    }
    let mut policy: Vec<PolicyYear> = policy
        .into_iter()
        .enumerate()
        .map(|(y, p)| p.ok_or_else(|| ScenarioError::new(&policy_t.path, None, format!("no row for year {}", g.years[y]))))
        .collect::<Result<_, _>>()?;
    if let Some(elcc) = optional_table::<ElccRow>(
        dir,
        "elcc.csv",
        &["surface", "year", "intercept", "wind_slope", "solar_slope", "storage_slope"],
        &[],
    )? {
        for (row, e) in &elcc.rows {
            let y = ctx.year(&elcc.path, *row, e.year)?;
            let plane = ElccPlane {
                intercept: e.intercept,
                wind_slope: e.wind_slope,
                solar_slope: e.solar_slope,
                storage_slope: e.storage_slope,
            };
            match e.surface.as_str() {
                "vre" => policy[y].vre_elcc.planes.push(plane),
                "storage" => policy[y].storage_elcc.planes.push(plane),
                other => {
                    return Err(ScenarioError::new(
                        &elcc.path,
                        Some(*row),
                        format!("surface must be `vre` or `storage`, got `{other}`"),
                    ))
                }
            }
        }
    }

    // economics keyed by (resource, component)
    let mut costs: HashMap<(String, String), (u64, Economics)> = HashMap::new();
    let costs_t = optional_table::<CostRow>(
        dir,
        "costs.csv",
        &["resource", "component", "capital", "maintenance", "lifetime"],
        &[],
    )?;
    if let Some(t) = &costs_t {
        for (row, c) in &t.rows {
            if !matches!(c.component.as_str(), "unit" | "power" | "energy") {
                return Err(ScenarioError::new(
                    &t.path,
                    Some(*row),
                    format!("component must be unit, power or energy, got `{}`", c.component),
                ));
            }
            let e = Economics {
                capital: c.capital,
                maintenance: c.maintenance,
                lifetime_years: c.lifetime,
            };
            if costs.insert((c.resource.clone(), c.component.clone()), (*row, e)).is_some() {
                return Err(ScenarioError::new(&t.path, Some(*row), "duplicate cost row"));
            }
        }
    }
    let mut used_costs: HashSet<(String, String)> = HashSet::new();
    let mut econ = |id: &str, component: &str| -> Economics {
        let key = (id.to_string(), component.to_string());
        let e = costs.get(&key).map(|x| x.1.clone()).unwrap_or_default();
        used_costs.insert(key);
        e
    };

    let mut ids = HashSet::new();

    let thermal_t: Table<ThermalRow> = read_table(
        dir,
        "thermal.csv",
        &[
            "id", "zone", "p_max", "p_min", "ramp_up", "ramp_down", "min_up", "min_down", "startup_cost",
            "shutdown_cost", "cost_slope", "cost_intercept", "emis_slope", "emis_intercept", "nqc", "status",
            "retirable", "planned_from", "planned_until",
        ],
        &[],
    )?;
    unique_ids(&thermal_t.path, thermal_t.rows.iter().map(|(r, x)| (*r, x.id.as_str())), &mut ids)?;
    let mut thermal = Vec::new();
    for (row, t) in &thermal_t.rows {
        thermal.push(ThermalUnit {
            id: t.id.clone(),
            zone: ctx.zone(&thermal_t.path, *row, &t.zone)?,
            p_max: t.p_max,
            p_min: t.p_min,
            ramp_up: t.ramp_up,
            ramp_down: t.ramp_down,
            min_up_hours: t.min_up,
            min_down_hours: t.min_down,
            startup_cost: t.startup_cost,
            shutdown_cost: t.shutdown_cost,
            cost_slope: t.cost_slope,
            cost_intercept: t.cost_intercept,
            emission_slope: t.emis_slope,
            emission_intercept: t.emis_intercept,
            nqc: t.nqc,
            status: t.status,
            retirable: t.retirable,
            planned_from: t.planned_from,
            planned_until: t.planned_until,
            economics: econ(&t.id, "unit"),
        });
    }

    let mut renewables = Vec::new();
    if let Some(t) = optional_table::<RenewableRow>(
        dir,
        "renewables.csv",
        &[
            "id", "zone", "kind", "curtailable", "rps_eligible", "curtail_cost", "planned_mw", "candidate",
            "max_build_mw",
        ],
        &[],
    )? {
        unique_ids(&t.path, t.rows.iter().map(|(r, x)| (*r, x.id.as_str())), &mut ids)?;
        for (row, r) in &t.rows {
            renewables.push(RenewableResource {
                id: r.id.clone(),
                zone: ctx.zone(&t.path, *row, &r.zone)?,
                kind: r.kind,
                production: vec![f64::NAN; nprod],
                curtailable: r.curtailable,
                rps_eligible: r.rps_eligible,
                curtail_cost: r.curtail_cost,
                planned_mw: vec![r.planned_mw; ny],
                candidate: r.candidate,
                max_build_mw: r.max_build_mw,
                economics: econ(&r.id, "power"),
            });
        }
        let prod: Table<ProductionRow> =
            read_table(dir, "production.csv", &["resource", "period", "hour", "factor"], &[])?;
        for (row, p) in &prod.rows {
            let r = renewables
                .iter_mut()
                .find(|r| r.id == p.resource)
                .ok_or_else(|| ScenarioError::new(&prod.path, Some(*row), format!("unknown renewable `{}`", p.resource)))?;
            let w = ctx.period(&prod.path, *row, &p.period)?;
            let h = ctx.hour(&prod.path, *row, p.hour)?;
            r.production[w * g.hours() + h] = p.factor;
        }
        for r in &renewables {
            if let Some(i) = r.production.iter().position(|x| x.is_nan()) {
                return Err(ScenarioError::new(
                    &prod.path,
                    None,
                    format!(
                        "no production factor for `{}` in period `{}` hour {}",
                        r.id,
                        g.periods[i / g.hours()].id,
                        i % g.hours()
                    ),
                ));
            }
        }
    }

    let mut storage = Vec::new();
    if let Some(t) = optional_table::<StorageRow>(
        dir,
        "storage.csv",
        &[
            "id", "zone", "planned_mw", "planned_mwh", "eta_charge", "eta_discharge", "self_discharge",
            "soc_max_fraction", "soc_min_fraction", "min_charge_hours", "min_discharge_hours", "candidate",
            "max_build_mw", "max_build_mwh", "energy_retirement",
        ],
        &[],
    )? {
        unique_ids(&t.path, t.rows.iter().map(|(r, x)| (*r, x.id.as_str())), &mut ids)?;
        for (row, s) in &t.rows {
            storage.push(StorageResource {
                id: s.id.clone(),
                zone: ctx.zone(&t.path, *row, &s.zone)?,
                planned_mw: vec![s.planned_mw; ny],
                planned_mwh: vec![s.planned_mwh; ny],
                eta_charge: s.eta_charge,
                eta_discharge: s.eta_discharge,
                self_discharge: s.self_discharge,
                soc_max_fraction: s.soc_max_fraction,
                soc_min_fraction: s.soc_min_fraction,
                min_charge_hours: s.min_charge_hours,
                min_discharge_hours: s.min_discharge_hours,
                candidate: s.candidate,
                max_build_mw: s.max_build_mw,
                max_build_mwh: s.max_build_mwh,
                energy_retirement: s.energy_retirement,
                power_economics: econ(&s.id, "power"),
                energy_economics: econ(&s.id, "energy"),
            });
        }
    }

    let mut hydro = Vec::new();
    if let Some(t) = optional_table::<HydroRow>(
        dir,
        "hydro.csv",
        &["id", "zone", "p_max", "p_min", "ramp_up", "ramp_down", "budget_mwh", "nqc"],
        &[],
    )? {
        unique_ids(&t.path, t.rows.iter().map(|(r, x)| (*r, x.id.as_str())), &mut ids)?;
        for (row, h) in &t.rows {
            hydro.push(HydroUnit {
                id: h.id.clone(),
                zone: ctx.zone(&t.path, *row, &h.zone)?,
                p_max: h.p_max,
                p_min: h.p_min,
                ramp_up: h.ramp_up,
                ramp_down: h.ramp_down,
                budget_mwh: h.budget_mwh,
                nqc: h.nqc,
                maintenance: econ(&h.id, "power").maintenance,
            });
        }
    }

    if let Some(t) = &costs_t {
        for (key, (row, _)) in &costs {
            if !used_costs.contains(key) {
                return Err(ScenarioError::new(
                    &t.path,
                    Some(*row),
                    format!("no resource `{}` takes a `{}` cost", key.0, key.1),
                ));
            }
        }
    }

    if let Some(t) = optional_table::<PlannedRow>(dir, "planned.csv", &["resource", "year", "mw"], &["mwh"])? {
        for (row, p) in &t.rows {
            let y = ctx.year(&t.path, *row, p.year)?;
            if let Some(r) = renewables.iter_mut().find(|r| r.id == p.resource) {
                r.planned_mw[y] = p.mw;
            } else if let Some(s) = storage.iter_mut().find(|s| s.id == p.resource) {
                s.planned_mw[y] = p.mw;
                if let Some(e) = p.mwh {
                    s.planned_mwh[y] = e;
                }
            } else {
                return Err(ScenarioError::new(
                    &t.path,
                    Some(*row),
                    format!("`{}` is not a renewable or storage resource", p.resource),
                ));
            }
        }
    }

    let mut lines = Vec::new();
    if let Some(t) = optional_table::<LineRow>(
        dir,
        "lines.csv",
        &["id", "from", "to", "limit_mw", "wheeling_cost", "import_emission_rate"],
        &[],
    )? {
        for (row, l) in &t.rows {
            let from = ctx.zone(&t.path, *row, &l.from)?;
            let to = ctx.zone(&t.path, *row, &l.to)?;
            lines.push(Line {
                id: l.id.clone(),
                incidence: vec![(from, -1), (to, 1)],
                limit_mw: l.limit_mw,
                wheeling_cost: l.wheeling_cost,
                import_emission_rate: l.import_emission_rate,
            });
        }
    }

    let load_t: Table<LoadRow> = read_table(dir, "load.csv", &["zone", "year", "period", "hour", "mw"], &[])?;
    let mut loads = vec![vec![f64::NAN; g.num_slots()]; file.zones.len()];
    for (row, l) in &load_t.rows {
        let z = ctx.zone(&load_t.path, *row, &l.zone)?;
        let y = ctx.year(&load_t.path, *row, l.year)?;
        let w = ctx.period(&load_t.path, *row, &l.period)?;
        let h = ctx.hour(&load_t.path, *row, l.hour)?;
        let slot = &mut loads[z][g.slot(y, w, h)];
        if !slot.is_nan() {
            return Err(ScenarioError::new(&load_t.path, Some(*row), "duplicate load entry"));
        }
        *slot = l.mw;
    }
    for (z, series) in loads.iter().enumerate() {
        if let Some(i) = series.iter().position(|x| x.is_nan()) {
            let (yw, h) = (i / g.hours(), i % g.hours());
            return Err(ScenarioError::new(
                &load_t.path,
                None,
                format!(
                    "no load for zone `{}` year {} period `{}` hour {h}",
                    file.zones[z].id,
                    g.years[yw / g.num_periods()],
                    g.periods[yw % g.num_periods()].id
                ),
            ));
        }
    }

    let ev_zone = if file.ev.zone.is_empty() {
        file.zones.iter().position(|z| z.policy_zone).unwrap_or(0)
    } else {
        file.zones
            .iter()
            .position(|z| z.id == file.ev.zone)
            .ok_or_else(|| ScenarioError::new(&sys_path, None, format!("ev zone `{}` is not a zone", file.ev.zone)))?
    };

    let fleet = load_fleet(dir, &ctx, ev_zone)?;

    let system = SystemData {
        name: file.name.clone(),
        grid: file.time_grid.clone(),
        discount_rate: file.discount_rate,
        zones: file
            .zones
            .iter()
            .zip(loads)
            .map(|(z, load)| Zone {
                id: z.id.clone(),
                policy_zone: z.policy_zone,
                load,
            })
            .collect(),
        lines,
        thermal,
        renewables,
        storage,
        hydro,
        policy,
        ev: file.ev.clone(),
    };
    Ok(Scenario {
        dir: dir.to_path_buf(),
        system,
        fleet,
        ev_zone,
    })
}

fn class(path: &Path, row: u64, s: &str) -> Result<VehicleClass, ScenarioError> {
    s.parse().map_err(|e: String| ScenarioError::new(path, Some(row), e))
}

fn load_fleet(dir: &Path, ctx: &Ctx<'_>, ev_zone: usize) -> Result<FleetSource, ScenarioError> {
    let has_drives = dir.join("drives.csv").exists();
    let has_clusters = dir.join("clusters.csv").exists();
    if has_drives && has_clusters {
        return Err(ScenarioError::new(
            dir.join("clusters.csv"),
            None,
            "a scenario provides either drives.csv or clusters.csv, not both",
        ));
    }
    if has_drives {
        let drives: Table<DriveRow> =
            read_table(dir, "drives.csv", &["class", "vocation", "start_hhmm", "end_hhmm", "miles"], &[])?;
        let mut records = Vec::with_capacity(drives.rows.len());
        for (row, d) in &drives.rows {
            let bad = |e: String| ScenarioError::new(&drives.path, Some(*row), e);
            if !(d.miles > 0.0) {
                return Err(bad("miles must be positive".into()));
            }
            records.push(DriveRecord {
                class: class(&drives.path, *row, &d.class)?,
                vocation: d.vocation.clone(),
                start: parse_hhmm(&d.start_hhmm).map_err(bad)?,
                end: parse_hhmm(&d.end_hhmm).map_err(&bad)?,
                miles: d.miles,
            });
        }
        let pop: Table<PopulationRow> = read_table(dir, "population.csv", &["year", "class", "vocation", "count"], &[])?;
        let mut projections = Vec::new();
        for (row, p) in &pop.rows {
            ctx.year(&pop.path, *row, p.year)?;
            projections.push(Projection {
                year: p.year,
                class: class(&pop.path, *row, &p.class)?,
                vocation: p.vocation.clone(),
                count: p.count,
            });
        }
        return Ok(FleetSource::Drives { records, projections });
    }
    if has_clusters {
        return read_clusters(dir, ctx.grid, ev_zone).map(FleetSource::Clusters);
    }
    Ok(FleetSource::None)
}

const CLUSTER_COLUMNS: [&str; 14] = [
    "cluster", "zone", "year", "depot_hour", "drive_hour", "time_wrap", "vehicles", "p_max_mw", "c_max_mwh",
    "c_min_mwh", "c_depot_mwh", "c_drive_mwh", "eta_charge", "eta_discharge",
];

fn read_clusters(dir: &Path, grid: &TimeGrid, ev_zone: usize) -> Result<EvFleet, ScenarioError> {
    let t: Table<ClusterRow> = read_table(dir, "clusters.csv", &CLUSTER_COLUMNS, &["regime"])?;
    let mut fleet = EvFleet::empty(ev_zone, &grid.years);
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    for (row, c) in &t.rows {
        let y = grid
            .year_index(c.year)
            .ok_or_else(|| ScenarioError::new(&t.path, Some(*row), format!("year {} is not an investment year", c.year)))?;
        if c.cluster == UNMODELED {
            fleet.unmodeled[y].vehicles = c.vehicles;
            continue;
        }
        let (Some(a), Some(b)) = (c.depot_hour, c.drive_hour) else {
            return Err(ScenarioError::new(&t.path, Some(*row), "depot_hour and drive_hour are required"));
        };
        let window = ChargeWindow::new(a, b)
            .ok_or_else(|| ScenarioError::new(&t.path, Some(*row), format!("invalid window {a} → {b}")))?;
        if let Some(wrap) = c.time_wrap {
            if wrap != window.time_wrap() {
                return Err(ScenarioError::new(
                    &t.path,
                    Some(*row),
                    format!("time_wrap {wrap} contradicts window {a} → {b}"),
                ));
            }
        }
        let idx = *index.entry(c.cluster.clone()).or_insert_with(|| {
            fleet.clusters.push(EvCluster {
                id: c.cluster.clone(),
                zone: ev_zone,
                window,
                eta_charge: c.eta_charge,
                eta_discharge: c.eta_discharge,
                years: grid.years.iter().map(|&y| ClusterYear::empty(y)).collect(),
            });
            fleet.clusters.len() - 1
        });
        let cl = &mut fleet.clusters[idx];
        if cl.window != window {
            return Err(ScenarioError::new(&t.path, Some(*row), "cluster window differs between years"));
        }
        cl.years[y] = ClusterYear {
            year: c.year,
            vehicles: c.vehicles,
            p_max_mw: c.p_max_mw,
            c_max_mwh: c.c_max_mwh,
            c_min_mwh: c.c_min_mwh,
            c_depot_mwh: c.c_depot_mwh,
            c_drive_mwh: c.c_drive_mwh,
            fixed_profile: vec![0.0; 24],
        };
    }
    let p: Table<ProfileRow> = read_table(dir, "fixed_profiles.csv", &["cluster", "year", "hour", "mw"], &[])?;
    for (row, r) in &p.rows {
        let y = grid
            .year_index(r.year)
            .ok_or_else(|| ScenarioError::new(&p.path, Some(*row), format!("year {} is not an investment year", r.year)))?;
        if r.hour >= 24 {
            return Err(ScenarioError::new(&p.path, Some(*row), "hour must lie in 0..24"));
        }
        if r.cluster == UNMODELED {
            fleet.unmodeled[y].profile[r.hour] = r.mw;
            continue;
        }
        let idx = *index
            .get(&r.cluster)
            .ok_or_else(|| ScenarioError::new(&p.path, Some(*row), format!("unknown cluster `{}`", r.cluster)))?;
        fleet.clusters[idx].years[y].fixed_profile[r.hour] = r.mw;
    }
    Ok(fleet)
}

fn csv_err(path: &Path, e: impl std::fmt::Display) -> ScenarioError {
    ScenarioError::new(path, None, e.to_string())
}

/// Writes `clusters.csv` and `fixed_profiles.csv` in the format read back by
/// scenarios that ship their clusters directly.
pub fn write_clusters(
    dir: &Path,
    fleet: &EvFleet,
    zone_id: &str,
    regime: Option<&str>,
) -> Result<(), ScenarioError> {
    fs::create_dir_all(dir).map_err(|e| csv_err(dir, e))?;
    let path = dir.join("clusters.csv");
    let mut w = csv::Writer::from_path(&path).map_err(|e| csv_err(&path, e))?;
    for c in &fleet.clusters {
        for y in &c.years {
            w.serialize(ClusterRow {
                cluster: c.id.clone(),
                zone: zone_id.to_string(),
                year: y.year,
                regime: regime.map(str::to_string),
                depot_hour: Some(c.window.start),
                drive_hour: Some(c.window.end),
                time_wrap: Some(c.window.time_wrap()),
                vehicles: y.vehicles,
                p_max_mw: y.p_max_mw,
                c_max_mwh: y.c_max_mwh,
                c_min_mwh: y.c_min_mwh,
                c_depot_mwh: y.c_depot_mwh,
                c_drive_mwh: y.c_drive_mwh,
                eta_charge: c.eta_charge,
                eta_discharge: c.eta_discharge,
            })
            .map_err(|e| csv_err(&path, e))?;
        }
    }
    for u in &fleet.unmodeled {
        w.serialize(ClusterRow {
            cluster: UNMODELED.into(),
            zone: zone_id.to_string(),
            year: u.year,
            regime: regime.map(str::to_string),
            depot_hour: None,
            drive_hour: None,
            time_wrap: None,
            vehicles: u.vehicles,
            p_max_mw: 0.0,
            c_max_mwh: 0.0,
            c_min_mwh: 0.0,
            c_depot_mwh: 0.0,
            c_drive_mwh: 0.0,
            eta_charge: 1.0,
            eta_discharge: 1.0,
        })
        .map_err(|e| csv_err(&path, e))?;
    }
    w.flush().map_err(|e| csv_err(&path, e))?;

    let path = dir.join("fixed_profiles.csv");
    let mut w = csv::Writer::from_path(&path).map_err(|e| csv_err(&path, e))?;
    let profile_rows = fleet
        .clusters
        .iter()
        .flat_map(|c| c.years.iter().map(move |y| (c.id.as_str(), y.year, &y.fixed_profile)))
        .chain(fleet.unmodeled.iter().map(|u: &UnmodeledYear| (UNMODELED, u.year, &u.profile)));
    for (id, year, profile) in profile_rows {
        for (hour, mw) in profile.iter().enumerate() {
            w.serialize(ProfileRow {
                cluster: id.to_string(),
                year,
                hour,
                mw: *mw,
            })
            .map_err(|e| csv_err(&path, e))?;
        }
    }
    w.flush().map_err(|e| csv_err(&path, e))?;
    Ok(())
}
