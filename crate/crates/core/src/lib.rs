//! Capacity-expansion and unit-commitment planning with truck fleet charging.
//!
//! The planning problem is assembled as a [`lp::LinearModel`] from a
//! [`model::SystemData`] and an [`ev::EvFleet`], then solved either directly
//! or by surrogate Lagrangian relaxation of the zonal power balance.

pub mod analysis;
pub mod error;
pub mod ev;
pub mod lp;
pub mod model;
pub mod plan;
pub mod slr;
pub mod solution;
pub mod uc;

pub use error::{Error, Result, ScenarioError};
pub use ev::{ChargingRegime, EvCluster, EvFleet, EvSettings};
pub use lp::{SolveOptions, SolveStatus, SolverBackend};
pub use model::{Scenario, SystemData, TimeGrid};
pub use plan::{build_plan, BalanceMode, PlanningModel};
pub use solution::PlanSolution;
