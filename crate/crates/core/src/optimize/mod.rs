//! Exact linear and integer programming used by the flat-norm solvers.

pub mod ilp;
pub mod lp;

pub use ilp::{solve_ilp, IlpSolution, DEFAULT_NODE_LIMIT};
pub use lp::{LinearProgram, LpOutcome, Relation};
