//! Experiment front end for the Rosenau DG solver: JSON problem
//! configuration, the solve/convergence/decay runners, and CSV/SVG/JSON
//! report emission.

pub mod config;
pub mod error;
pub mod plot;
pub mod problem;
pub mod report;
pub mod runner;

pub use config::{ConfigFile, DtPolicy, Elements};
pub use error::CliError;
pub use problem::Problem;
pub use runner::{run_convergence, run_decay, run_solve, DecaySummary, SolveSummary};

/// git-describe style version tag of this build.
pub fn version_string() -> String {
    format!("rosenau-v{}", env!("CARGO_PKG_VERSION"))
}
