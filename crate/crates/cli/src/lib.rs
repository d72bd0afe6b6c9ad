//! Scenario runner: reads a JSON scenario, solves the requested Hermite–Padé
//! problems, runs the verification checks and writes CSV tables, a summary
//! and a manifest.

pub mod error;
pub mod output;
pub mod run;
pub mod scenario;

pub use error::{CliError, CliResult};
pub use run::{aggregate, run_scenario, Command, RunOptions, RunOutcome};
pub use scenario::Scenario;
