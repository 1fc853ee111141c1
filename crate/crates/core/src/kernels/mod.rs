//! Self-contained combinatorial and numerical kernels: integral flows and
//! an exact rational simplex. Everything above builds on these.

pub mod flow;
pub mod simplex;

pub use flow::{flow_is_valid, max_flow, min_cost_flow_with_bounds, FlowArc, FlowNetwork};
pub use simplex::{simplex_max, solution_satisfies, LinearProgram, LpOutcome, Rat, Relation};
