use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use gridfleet_core::analysis::report::write_csv;
use gridfleet_core::analysis::*;
use gridfleet_core::model::{load_scenario, validate_system, write_clusters, FleetSource};
use gridfleet_core::{ChargingRegime, PlanSolution};
use serde::Serialize;

use crate::{Cli, Command, SolveArgs};

const BUNDLED: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenarios");

pub fn dispatch(cli: Cli) -> Result<()> {
    let backend = cli.backend.clone();
    let threads = cli.threads;
    match cli.command {
        Command::Validate { scenario } => validate(&scenario),
        Command::Cluster { scenario, seed, out } => cluster(&scenario, seed, &out),
        Command::Run { solve, regime } => {
            let cfg = run_config(&solve, regime, &backend, threads)?;
            let out = solve_one(&cfg, solve.out.as_deref(), solve.reproducible)?;
            print_run(&out);
            Ok(())
        }
        Command::Sweep {
            solve,
            regimes,
            parallel,
        } => sweep(&solve, &regimes, parallel, &backend, threads),
        Command::Report {
            baseline,
            alternative,
            out,
        } => report(&baseline, &alternative, out.as_deref()),
        Command::Degrade {
            scenario,
            seed,
            solutions,
            price,
            anchor,
            start,
            end,
        } => degrade(&scenario, seed, &solutions, price, anchor, start, end),
        Command::Chargers {
            solution,
            policy,
            v2g,
            unit_cost,
            inverter_per_kw,
            charger_kw,
        } => {
            let prices = ChargerPrices {
                unit_cost,
                inverter_per_kw,
                charger_kw,
            };
            chargers(&solution, policy, v2g, &prices)
        }
    }
}

/// A path as given, else a name under `$PLAN_SCENARIOS`, else a bundled scenario.
pub fn resolve_scenario(name: &str) -> Result<PathBuf> {
    let direct = PathBuf::from(name);
    if direct.is_dir() {
        return Ok(direct);
    }
    let mut tried = vec![direct.display().to_string()];
    if let Ok(root) = std::env::var("PLAN_SCENARIOS") {
        let p = Path::new(&root).join(name);
        if p.is_dir() {
            return Ok(p);
        }
        tried.push(p.display().to_string());
    }
    let bundled = Path::new(BUNDLED).join(name);
    if bundled.is_dir() {
        return Ok(bundled);
    }
    tried.push(bundled.display().to_string());
    bail!("scenario `{name}` not found (tried {})", tried.join(", "))
}

fn run_config(solve: &SolveArgs, regime: ChargingRegime, backend: &str, threads: usize) -> Result<RunConfig> {
    let mut cfg = RunConfig::new(resolve_scenario(&solve.scenario)?, regime, solve.mode);
    cfg.seed = solve.seed;
    cfg.backend = backend.to_string();
    cfg.solver.mip_gap = solve.gap.unwrap_or(match solve.mode {
        SolveMode::Monolithic => 1e-4,
        SolveMode::Slr => 1e-3,
    });
    cfg.solver.threads = threads.max(1);
    cfg.solver.time_limit = solve.time_limit;
    cfg.slr.max_iterations = solve.max_iterations;
    Ok(cfg)
}

fn solve_one(cfg: &RunConfig, out: Option<&Path>, reproducible: bool) -> Result<RunOutput> {
    let mut o = run(cfg)?;
    if reproducible {
        o.solution.seconds = 0.0;
        for it in &mut o.iterations {
            it.seconds = 0.0;
        }
    }
    if let Some(dir) = out {
        write_solution(dir, &o.solution)?;
        if !o.iterations.is_empty() {
            write_iterations(dir, &o.iterations)?;
        }
        let zone = &o.system.zones[o.fleet.zone].id;
        write_clusters(dir, &o.fleet, zone, Some(&cfg.regime.to_string()))?;
    }
    Ok(o)
}

fn print_run(o: &RunOutput) {
    let s = &o.solution;
    println!(
        "{} {} {}: objective {:.6e}, bound {:.6e}, gap {:.2e}, status {}, {:.1}s",
        s.scenario, s.regime, s.method, s.objective, s.dual_bound, s.gap, s.seconds, s.status
    );
    if !o.iterations.is_empty() {
        let last = o.iterations.last().unwrap();
        println!("  {} surrogate iterations, last max residual {:.4} MW", o.iterations.len(), last.max_residual);
    }
    for &y in &s.years {
        print!("  {y}:");
        for kind in ["thermal", "solar", "wind", "storage_power", "storage_energy"] {
            print!(" {kind} {:.1}", s.capacity(y, kind));
        }
        println!();
    }
}

fn validate(name: &str) -> Result<()> {
    let dir = resolve_scenario(name)?;
    let s = load_scenario(&dir)?;
    let problems = validate_system(&s.system);
    if !problems.is_empty() {
        bail!("{} problem(s):\n  {}", problems.len(), problems.join("\n  "));
    }
    let sys = &s.system;
    let fleet = match &s.fleet {
        FleetSource::None => "no trucks".to_string(),
        FleetSource::Drives { records, .. } => format!("{} drive records", records.len()),
        FleetSource::Clusters(f) => format!("{} clusters", f.clusters.len()),
    };
    println!(
        "{}: {} zones, {} thermal, {} renewable, {} storage, {} hydro, {} lines, years {:?}, {} periods, {fleet}",
        sys.name,
        sys.zones.len(),
        sys.thermal.len(),
        sys.renewables.len(),
        sys.storage.len(),
        sys.hydro.len(),
        sys.lines.len(),
        sys.grid.years,
        sys.grid.periods.len()
    );
    Ok(())
}

fn cluster(name: &str, seed: u64, out: &Path) -> Result<()> {
    let s = load_scenario(resolve_scenario(name)?)?;
    let fleet = prepare_fleet(&s, seed)?;
    write_clusters(out, &fleet, &s.system.zones[fleet.zone].id, None)?;
    println!("{} clusters", fleet.clusters.len());
    for (i, y) in fleet.years.iter().enumerate() {
        println!(
            "  {y}: {} of {} vehicles modeled ({:.1}%)",
            fleet.modeled_vehicles(i),
            fleet.total_vehicles(i),
            100.0 * fleet.coverage(i)
        );
    }
    Ok(())
}

#[derive(Serialize)]
struct SavingsRow {
    baseline: ChargingRegime,
    alternative: ChargingRegime,
    year: u32,
    baseline_cost: f64,
    alternative_cost: f64,
    saving: f64,
    vehicles: u64,
    per_vehicle: f64,
}

impl SavingsRow {
    fn new(baseline: ChargingRegime, alternative: ChargingRegime, y: &YearSaving) -> Self {
        Self {
            baseline,
            alternative,
            year: y.year,
            baseline_cost: y.baseline_cost,
            alternative_cost: y.alternative_cost,
            saving: y.saving,
            vehicles: y.vehicles,
            per_vehicle: y.per_vehicle,
        }
    }
}

fn vehicles(sol: &PlanSolution) -> Vec<u64> {
    sol.years
        .iter()
        .map(|&y| sol.fleet.iter().find(|f| f.year == y).map_or(0, |f| f.total_vehicles as u64))
        .collect()
}

/// Prints cost summaries and per-vehicle savings against `base`.
fn savings(base: &PlanSolution, alts: &[PlanSolution], out: Option<&Path>) -> Result<()> {
    let n = vehicles(base);
    let mut reports = Vec::with_capacity(alts.len());
    for alt in alts {
        reports.push(levelized_savings(base, alt, &n)?);
    }
    println!(
        "{:<8} {:>14} {:>14} {:>14} {:>14} {:>14}",
        "regime", "total", "policy zone", "maintenance", "investment", "pz operation"
    );
    let row = |r: ChargingRegime, c: &CostSummary| {
        println!(
            "{:<8} {:>14.4e} {:>14.4e} {:>14.4e} {:>14.4e} {:>14.4e}",
            r.to_string(),
            c.total,
            c.policy_zone,
            c.maintenance,
            c.investment,
            c.policy_zone_operational
        )
    };
    row(base.regime, &CostSummary::of(base));
    for (alt, rep) in alts.iter().zip(&reports) {
        row(alt.regime, &rep.alternative);
    }
    let mut rows = Vec::new();
    for (alt, rep) in alts.iter().zip(&reports) {
        for y in &rep.years {
            println!(
                "  {} vs {} {}: saving {:.4e} $, {} vehicles, {:.0} $/vehicle-yr",
                alt.regime, base.regime, y.year, y.saving, y.vehicles, y.per_vehicle
            );
            rows.push(SavingsRow::new(base.regime, alt.regime, y));
        }
    }
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).with_context(|| dir.display().to_string())?;
        write_csv(&dir.join("savings.csv"), &rows)?;
    }
    Ok(())
}

fn sweep(solve: &SolveArgs, regimes: &[ChargingRegime], parallel: bool, backend: &str, threads: usize) -> Result<()> {
    if regimes.is_empty() {
        bail!("no regimes to sweep");
    }
    let configs: Vec<(RunConfig, Option<PathBuf>)> = regimes
        .iter()
        .map(|&r| {
            let cfg = run_config(solve, r, backend, threads)?;
            Ok((cfg, solve.out.as_ref().map(|d| d.join(r.to_string()))))
        })
        .collect::<Result<_>>()?;
    let outputs: Vec<RunOutput> = if parallel {
        std::thread::scope(|s| {
            let handles: Vec<_> = configs
                .iter()
                .map(|(cfg, out)| s.spawn(move || solve_one(cfg, out.as_deref(), solve.reproducible)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().unwrap_or_else(|_| bail!("a sweep run panicked")))
                .collect::<Result<_>>()
        })?
    } else {
        configs
            .iter()
            .map(|(cfg, out)| solve_one(cfg, out.as_deref(), solve.reproducible))
            .collect::<Result<_>>()?
    };
    for o in &outputs {
        print_run(o);
    }
    let sols: Vec<PlanSolution> = outputs.into_iter().map(|o| o.solution).collect();
    savings(&sols[0], &sols[1..], solve.out.as_deref())
}

fn report(baseline: &Path, alternatives: &[PathBuf], out: Option<&Path>) -> Result<()> {
    let base = read_solution(baseline)?;
    let alts = alternatives
        .iter()
        .map(|p| read_solution(p).map_err(anyhow::Error::from))
        .collect::<Result<Vec<_>>>()?;
    savings(&base, &alts, out)
}

fn degrade(
    name: &str,
    seed: u64,
    solutions: &[PathBuf],
    price: f64,
    anchor: f64,
    start: Option<u32>,
    end: Option<u32>,
) -> Result<()> {
    let s = load_scenario(resolve_scenario(name)?)?;
    let fleet = prepare_fleet(&s, seed)?;
    let years = &s.system.grid.years;
    let start = start.unwrap_or(years[0]);
    let end = end.unwrap_or(*years.last().unwrap());
    let inputs = solutions
        .iter()
        .map(|p| {
            let sol = read_solution(p)?;
            let input = DegradationInput::from_solution(&sol, &fleet, start, end)?;
            Ok((sol.regime, input))
        })
        .collect::<Result<Vec<_>>>()?;
    let base = DegradationParams {
        price_per_kwh: price,
        ..DegradationParams::default()
    };
    let k = calibrate(&inputs[0].1, &base, anchor)?;
    let params = DegradationParams { calibration: k, ..base };
    println!("calibration {k:.4} ({start}-{end}, {price} $/kWh)");
    for (regime, input) in &inputs {
        let r = degradation_proxy(input, &params)?;
        println!(
            "  {regime}: residual {:.2}%, calendar {:.2}, cycling {:.2}, {:.0} kWh, {:.4e} $",
            r.residual_pct, r.calendar_pct, r.cycling_pct, r.degraded_kwh, r.cost
        );
    }
    Ok(())
}

fn chargers(path: &Path, policy: ChargerPolicy, v2g: Option<bool>, prices: &ChargerPrices) -> Result<()> {
    let sol = read_solution(path)?;
    let v2g = v2g.unwrap_or(sol.regime == ChargingRegime::V2g);
    let counts = vehicles(&sol);
    println!("{policy:?} chargers, bidirectional: {v2g}");
    for ((year, peak), n) in ev_charging_peaks(&sol).into_iter().zip(counts) {
        let c = charger_costs(n, peak, policy, v2g, prices);
        let ratio = if c.chargers > 0 { n as f64 / c.chargers as f64 } else { 0.0 };
        println!(
            "  {year}: {n} vehicles, peak {peak:.2} MW, {} chargers ({ratio:.1} vehicles each), hardware {:.4e} $, inverters {:.4e} $, total {:.4e} $",
            c.chargers, c.hardware, c.inverters, c.total
        );
    }
    Ok(())
}
