//! Binary integer programs: model builder, exact solver and LP export.

mod lp;
mod model;
mod solver;

pub use lp::export_lp;
pub use model::{Cmp, Constraint, IlpModel, Sense, VarId};
pub use solver::{solve, solve_from, SolveOptions, SolveOutcome, SolveStatus};
