//! Report bundles and the process exit code derived from them.

use std::io;
use std::path::{Path, PathBuf};
use std::time::Duration;

use sha2::{Digest, Sha256};

use crate::config::{ConfigError, ExperimentConfig};
use crate::output::{fmt_f64, fmt_sig12, write_table};

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const TEST_FAILURE: i32 = 1;
    pub const INVALID_CONFIG: i32 = 2;
    pub const IO_ERROR: i32 = 3;
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub test: String,
    pub pass: bool,
    pub statistic: f64,
    /// `None` for rows that only report a value.
    pub threshold: Option<f64>,
}

impl SummaryRow {
    pub fn check(test: impl Into<String>, statistic: f64, threshold: f64, pass: bool) -> Self {
        Self {
            test: test.into(),
            pass,
            statistic,
            threshold: Some(threshold),
        }
    }

    /// `statistic < threshold`.
    pub fn below(test: impl Into<String>, statistic: f64, threshold: f64) -> Self {
        Self::check(test, statistic, threshold, statistic < threshold)
    }

    pub fn value(test: impl Into<String>, statistic: f64) -> Self {
        Self {
            test: test.into(),
            pass: true,
            statistic,
            threshold: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReportBundle {
    pub summary: Vec<SummaryRow>,
    /// CSV files, in the order they were written.
    pub artifacts: Vec<PathBuf>,
    pub config_echo: ExperimentConfig,
    pub wall_time: Duration,
}

impl ReportBundle {
    pub fn passed(&self) -> bool {
        self.summary.iter().all(|r| r.pass)
    }

    /// SHA-256 over the names and contents of every artifact.
    pub fn checksum(&self) -> io::Result<String> {
        let mut h = Sha256::new();
        for p in &self.artifacts {
            h.update(p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default().as_bytes());
            h.update(std::fs::read(p)?);
        }
        Ok(h.finalize().iter().map(|b| format!("{b:02x}")).collect())
    }
}

/// `test,pass,statistic,threshold` rows.
pub fn write_summary(path: &Path, config_hash: &str, rows: &[SummaryRow]) -> io::Result<()> {
    write_table(
        path,
        config_hash,
        &["test", "pass", "statistic", "threshold"],
        rows.iter().map(|r| {
            [
                r.test.clone(),
                r.pass.to_string(),
                fmt_f64(r.statistic),
                r.threshold.map(fmt_f64).unwrap_or_default(),
            ]
        }),
    )
}

/// Prints the summary and returns the exit code: 0 when every row passes,
/// 1 otherwise, 3 when a listed artifact is missing.
pub fn emit_reports(bundle: &ReportBundle) -> i32 {
    for r in &bundle.summary {
        let threshold = r.threshold.map(fmt_sig12).unwrap_or_default();
        println!(
            "{:<40} {:<4} {:>20} {:>20}",
            r.test,
            if r.pass { "pass" } else { "FAIL" },
            fmt_sig12(r.statistic),
            threshold
        );
    }
    if let Some(missing) = bundle.artifacts.iter().find(|p| !p.exists()) {
        eprintln!("missing artifact {}", missing.display());
        return exit::IO_ERROR;
    }
    println!(
        "{} artifacts in {} ({:.2} s)",
        bundle.artifacts.len(),
        bundle.config_echo.output_dir.display(),
        bundle.wall_time.as_secs_f64()
    );
    if bundle.passed() {
        exit::PASS
    } else {
        exit::TEST_FAILURE
    }
}

/// Failures of [`crate::run_experiment`].
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] heavytail_core::Error),
    #[error("cannot write to {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => exit::INVALID_CONFIG,
            Self::Io { .. } => exit::IO_ERROR,
            Self::Model(_) | Self::Pool(_) => exit::TEST_FAILURE,
        }
    }
}
