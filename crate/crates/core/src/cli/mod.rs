//! Configuration ingestion, the `threshold → state → certification`
//! pipeline and serialization of its tables and summary.

mod config;
mod run;

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Error;

pub use config::{
    default_check_config, CertifyConfig, ChecksConfig, Format, GridConfig, LadderConfig, ModelConfig, OutputConfig,
    RunConfig, SolverConfig, StateConfig,
};
pub use run::{cmd_check, cmd_converge, cmd_threshold};

/// Environment variable overriding the output directory.
pub const OUT_ENV: &str = "THRESHOLD_SPECTRA_OUT";
/// Environment variable setting the worker thread count.
pub const THREADS_ENV: &str = "THRESHOLD_SPECTRA_THREADS";

#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration value at `path`.
    Config { path: String, message: String },
    Usage(String),
    /// The pipeline failed numerically.
    Numeric(Error),
    /// The run completed but some check or certificate failed.
    Failed(Vec<String>),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Usage(_) => 2,
            CliError::Numeric(_) | CliError::Failed(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config { path, message } => write!(f, "config error at {path}: {message}"),
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numeric(e) => write!(f, "numeric failure: {e}"),
            CliError::Failed(items) => write!(f, "failed: {}", items.join("; ")),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Usage(m) => CliError::Usage(m),
            other => CliError::Numeric(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// A CSV table with a header row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Self { name: name.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push_numbers(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|v| format_number(*v)).collect());
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// Shortest round-trip decimal form; `nan`, `inf`, `-inf` otherwise.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:e}")
    }
}

/// Tables and summary produced by one command. `failures` lists failed
/// checks and certificates; a non-empty list makes the command exit 1
/// after everything is written.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub command: String,
    pub tables: Vec<Table>,
    pub summary: serde_json::Value,
    pub failures: Vec<String>,
}

impl RunOutput {
    /// Writes `<name>.csv` per table and `summary.json` into `dir`.
    pub fn write(&self, dir: &Path, formats: &[Format]) -> Result<Vec<PathBuf>, CliError> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        if formats.contains(&Format::Csv) {
            for table in &self.tables {
                let path = dir.join(format!("{}.csv", table.name));
                let mut w = csv::Writer::from_path(&path).map_err(csv_error)?;
                w.write_record(&table.header).map_err(csv_error)?;
                for row in &table.rows {
                    w.write_record(row).map_err(csv_error)?;
                }
                w.flush()?;
                written.push(path);
            }
        }
        if formats.contains(&Format::Json) {
            let path = dir.join("summary.json");
            let mut text = serde_json::to_string_pretty(&self.summary).map_err(|e| CliError::Io(e.into()))?;
            text.push('\n');
            std::fs::write(&path, text)?;
            written.push(path);
        }
        Ok(written)
    }

    pub fn into_result(self) -> Result<RunOutput, CliError> {
        if self.failures.is_empty() {
            Ok(self)
        } else {
            Err(CliError::Failed(self.failures))
        }
    }
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}

/// Output directory: the explicit argument, then the environment
/// override, then the config, then `out`.
pub fn resolve_out_dir(arg: Option<&Path>, config: &RunConfig) -> PathBuf {
    if let Some(p) = arg {
        return p.to_path_buf();
    }
    if let Ok(p) = std::env::var(OUT_ENV) {
        if !p.is_empty() {
            return PathBuf::from(p);
        }
    }
    config.output.directory.as_deref().map(PathBuf::from).unwrap_or_else(|| PathBuf::from("out"))
}

/// Sizes the global worker pool from [`THREADS_ENV`] when set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot size the thread pool: {e}")))
}

#[cfg(test)]
mod tests;
