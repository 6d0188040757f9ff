//! Run orchestration and post-processing: savings, battery wear, chargers.

pub mod chargers;
pub mod degradation;
pub mod report;
pub mod run;
pub mod savings;

pub use chargers::{charger_costs, peak_shared_count, ChargerCost, ChargerPolicy, ChargerPrices};
pub use degradation::{
    calibrate, degradation_proxy, rainflow, rainflow_cyclic, DegradationInput, DegradationParams, DegradationResult,
    BASELINE_RESIDUAL_PCT,
};
pub use report::{ev_charging_peaks, read_solution, write_iterations, write_solution};
pub use run::{prepare_fleet, run, solve_plan, RunConfig, RunError, RunOutput, SolveMode, Stage};
pub use savings::{levelized_savings, CostSummary, SavingsReport, YearSaving};
