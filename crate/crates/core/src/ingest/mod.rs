//! Everything that crosses the process boundary: profile CSVs and their JSON
//! sidecars, synthetic fixtures, run configuration, JSON reports and dispatch
//! CSVs.

mod config;
mod fixtures;
mod profiles;
mod report;

use std::path::PathBuf;

use thiserror::Error;

use crate::types::ValidationIssue;

pub use config::{load_config, RunConfig, ScenarioConfig, SolverConfig, ZoneSource};
pub use fixtures::{synth_fixture, Fixture, FixtureKind, FixtureSide};
pub use profiles::{
    load_grid_profile, load_re_profile, load_zone, sidecar_path, write_grid_profile, write_re_profile,
    ProfileMetadata,
};
pub use report::{
    read_json, write_dispatch_csv, write_json, write_sweep_csv, Provenance, ScenarioReport,
    ScenarioResultReport, ScenarioSummary, SuiteReport, SuiteRow, SweepPointReport, SweepReport,
    DISPATCH_COLUMNS, SCHEMA_VERSION,
};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: missing column `{column}`")]
    MissingColumn { path: PathBuf, column: &'static str },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },
    #[error("{path}: expected {expected} data rows, found {found}")]
    RowCount {
        path: PathBuf,
        expected: usize,
        found: usize,
    },
    #[error("{path}:{line}: {column} = {value} outside [0, {limit}] (reference capacity)")]
    Range {
        path: PathBuf,
        line: u64,
        column: &'static str,
        value: f64,
        limit: f64,
    },
    #[error("{path}: invalid profile: {issues:?}")]
    Validation {
        path: PathBuf,
        issues: Vec<ValidationIssue>,
    },
    #[error("{path}: {message}")]
    Json { path: PathBuf, message: String },
    #[error("{path}: {message}")]
    Config { path: PathBuf, message: String },
}

impl IngestError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        IngestError::Io {
            path: path.into(),
            source,
        }
    }
}
