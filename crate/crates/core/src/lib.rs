//! Solving linear ODEs with polynomial coefficients from function values.
//!
//! An order-`k` equation with `k` prescribed values `y(x_i)` is reduced one
//! order per condition, using truncated Taylor jets centered at the
//! evaluation point. See [`pipeline::solve`] for the entry point.

pub mod error;
pub mod expansion;
pub mod jet;
pub mod oracle;
pub mod pipeline;
pub mod problem;
pub mod quadrature;
pub mod recursion;
pub mod reduction;

pub use error::{Error, Result};
pub use jet::{Jet, JetSpec};
pub use pipeline::{
    solve, solve_point, ConditionOrder, Evaluation, PointSolution, SolutionReport, SolverConfig,
};
pub use problem::{Condition, FunctionValueProblem};
