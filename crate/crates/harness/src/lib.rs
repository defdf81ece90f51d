//! Experiment harness for `adarucb-core`: TOML configs, seeded replication
//! fan-out, regret summaries and CSV output.

pub mod config;
mod error;
pub mod experiment;
pub mod output;
pub mod suites;

pub use config::{load_config, parse_config, ExperimentConfig};
pub use error::{HarnessError, Result};
pub use experiment::{run_experiment, simulate, ExperimentOutput, SummaryRow};
