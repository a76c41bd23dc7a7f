//! Command-line front end for the forecasting game: scenario files in,
//! summaries, traces and verdicts out.

pub mod commands;
pub mod error;
pub mod scenario;

pub use commands::{run, seed_check, sweep, verdict, AlphaSelection, SeedCheck};
pub use error::CliError;
pub use scenario::{Overrides, ScenarioFile};
