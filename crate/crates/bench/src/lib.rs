//! Benchmark fixtures.

use std::path::PathBuf;

use gridfleet_core::model::{load_scenario, Scenario};

/// A scenario shipped with the workspace.
pub fn bundled(name: &str) -> Scenario {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name);
    load_scenario(dir).expect("bundled scenario loads")
}
