//! Scenario parsing, subcommand execution and file output for the `netsense` binary.

pub mod output;
pub mod runner;
pub mod scenario;

pub use output::{write_all, Artifact};
pub use runner::{execute, Command, Overrides, SEED_ENV};
pub use scenario::{parse_scenario, ScenarioError, ScenarioFile};
