//! Experiment harness for the `dcsim` simulator: config parsing, repeated
//! seeded runs and report output.

pub mod config;
pub mod experiment;
pub mod report;

pub use config::{parse_config, ConfigError, ExperimentSpec, Overrides};
pub use experiment::{run_experiment, ExperimentError, Report, ReportRow, Stat};
pub use report::{emit_report, Format};
