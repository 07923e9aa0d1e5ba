//! Small integer linear programming toolkit: a model type, LP relaxation
//! solvers, deterministic branch-and-bound and LP-format export.

mod bb;
mod error;
mod lp;
mod lp_format;
mod model;
mod simplex;

pub use bb::{
    solve_bb, BranchAndBound, IntSolution, SolveOptions, SolveStats, SolveStatus,
    DEFAULT_TIME_LIMIT,
};
pub use error::IlpError;
pub use lp::{
    solve_lp_relaxation, solve_lp_relaxation_with, LpEngine, LpOptions, LpSolution, LpStatus,
};
pub use lp_format::{export_lp_text, sanitize_name};
pub use model::{Constraint, IlpModel, Sense, VarId, Variable};
