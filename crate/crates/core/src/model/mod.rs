//! Domain data, time grid and scenario input.

pub mod fixtures;
pub mod io;
pub mod schema;
pub mod system;
pub mod time;
pub mod validate;

pub use io::{load_scenario, write_clusters, FleetSource, Scenario};
pub use system::*;
pub use time::{tau, BlockKey, Period, TimeGrid, HOURS_PER_YEAR};
pub use validate::validate_system;
