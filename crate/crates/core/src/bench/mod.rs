//! Benchmark problems, exact solutions and convergence studies.

pub mod cases;
pub mod convergence;
pub mod exact;
pub mod geometry;
pub mod largedef;

pub use cases::{case_error, solve_level, solve_model, Case, LevelSolution, Method, StudyConfig};
pub use convergence::{observed_rate, run_convergence, ConvergenceReport, ConvergenceRow};
pub use largedef::{run_largedef, LargeDefConfig, LargeDefRow, LoadCase};
