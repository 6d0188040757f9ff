//! Linear/mixed-integer model representation and solver backends.

mod backend;
mod expr;
mod highs;
mod model;

pub use backend::{
    backend_by_name, Capabilities, SolveOptions, SolveOutcome, SolveStatus, SolverBackend,
    SolverError,
};
pub use expr::{LinExpr, VarId};
pub use highs::HighsBackend;
pub use model::{BlockId, Constraint, Family, LinearModel, Restricted, VarKind, Variable, Violation};
