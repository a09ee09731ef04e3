//! Library side of the `httool` command: scenario configs, the scenario
//! runner, the empirical estimator and the CSV format.

pub mod app;
pub mod config;
pub mod error;
pub mod estimate;
pub mod scenario;
pub mod table;

pub use app::run_cli;
pub use config::{load_config, parse_config, ScenarioConfig};
pub use error::CliError;
pub use estimate::estimate_from_data;
pub use scenario::{run_scenario, RunSummary};
