//! Experiment runner for `trigint`: config parsing, sample ingestion,
//! the experiment drivers and CSV export.

pub mod config;
pub mod dataset;
pub mod error;
pub mod experiments;
pub mod export;

pub use config::ExperimentConfig;
pub use error::{CliError, CliResult};
pub use experiments::{run_experiment, Report};
