//! Experiment runner for `heavytail-core`: flat key-value configs, a
//! deterministic replicate pool, CSV reports and exit codes.

pub mod config;
pub mod experiments;
pub mod output;
pub mod report;
pub mod runner;

pub use config::{ConfigError, Experiment, ExperimentConfig, RowModel, Spectral, TailFamily};
pub use experiments::{run_experiment, run_experiment_with};
pub use report::{emit_reports, exit, ReportBundle, RunError, SummaryRow};
