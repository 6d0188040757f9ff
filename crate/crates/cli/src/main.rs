//! `plan`: scenario validation, fleet clustering, planning runs and
//! post-processing reports.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gridfleet_core::analysis::{ChargerPolicy, SolveMode};
use gridfleet_core::ChargingRegime;

#[derive(Parser)]
#[command(name = "plan", version, about = "Capacity expansion and unit commitment with truck fleet charging")]
struct Cli {
    /// More log output (repeat for debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    /// Solver backend.
    #[arg(long, env = "PLAN_BACKEND", default_value = "highs", global = true)]
    backend: String,
    /// Solver threads.
    #[arg(long, env = "PLAN_THREADS", default_value_t = 1, global = true)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a scenario and report every data problem.
    Validate {
        #[arg(long)]
        scenario: String,
    },
    /// Bootstrap and cluster the truck fleet, writing clusters.csv and fixed_profiles.csv.
    Cluster {
        #[arg(long)]
        scenario: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve one charging regime.
    Run {
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long)]
        regime: ChargingRegime,
    },
    /// Solve several regimes and report savings against the first.
    Sweep {
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long, value_delimiter = ',', default_values_t = ChargingRegime::ALL)]
        regimes: Vec<ChargingRegime>,
        /// Solve the regimes concurrently, each into its own directory.
        #[arg(long)]
        parallel: bool,
    },
    /// Cost summary and per-vehicle savings of solved plans against a baseline.
    Report {
        /// Baseline plan_solution.json (or its directory).
        #[arg(long)]
        baseline: PathBuf,
        /// Alternative solutions.
        #[arg(long, required = true, num_args = 1..)]
        alternative: Vec<PathBuf>,
        /// Write savings.csv here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Battery degradation proxy, calibrated on the first solution.
    Degrade {
        #[arg(long)]
        scenario: String,
        /// Fleet seed the solutions were run with.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, required = true, num_args = 1..)]
        solutions: Vec<PathBuf>,
        /// Degradation price ($/kWh).
        #[arg(long, default_value_t = 100.0)]
        price: f64,
        /// Residual capacity (%) the first solution is calibrated to.
        #[arg(long, default_value_t = gridfleet_core::analysis::BASELINE_RESIDUAL_PCT)]
        anchor: f64,
        /// First aging year (default: first planning year).
        #[arg(long)]
        start: Option<u32>,
        /// End of the aging interval, exclusive (default: last planning year).
        #[arg(long)]
        end: Option<u32>,
    },
    /// Depot charger counts and costs of a solved plan.
    Chargers {
        #[arg(long)]
        solution: PathBuf,
        #[arg(long, default_value = "dedicated")]
        policy: ChargerPolicy,
        /// Bidirectional chargers (default: when the plan is V2G).
        #[arg(long)]
        v2g: Option<bool>,
        /// Hardware and installation per charger ($).
        #[arg(long, default_value_t = 142_200.0)]
        unit_cost: f64,
        /// Inverter cost ($/kW).
        #[arg(long, default_value_t = 50.0)]
        inverter_per_kw: f64,
        #[arg(long, default_value_t = 150.0)]
        charger_kw: f64,
    },
}

#[derive(Args, Clone)]
struct SolveArgs {
    /// Scenario directory or bundled scenario name.
    #[arg(long)]
    scenario: String,
    #[arg(long, default_value = "slr")]
    mode: SolveMode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative MIP gap (default 1e-4 monolithic, 1e-3 per relaxed solve).
    #[arg(long)]
    gap: Option<f64>,
    /// Wall-clock limit per solver call (s).
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long, default_value_t = 500)]
    max_iterations: usize,
    /// Output directory for reports.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Zero wall-clock fields so repeated runs write identical files.
    #[arg(long)]
    reproducible: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match commands::dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
