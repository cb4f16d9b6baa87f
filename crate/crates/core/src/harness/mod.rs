//! Convergence studies, benchmarks and their CSV/JSON output.

mod config;
mod estimate;
mod record;
mod study;

pub use config::{parse_config, Format, OutputConfig, ProblemKey, ProfileKey, StudyConfig};
pub use estimate::{rate, space_error_between, time_error_between};
pub use record::{emit, Axis, ConvergenceTable, RunRecord};
pub use study::{benchmark_findings, run_benchmark, run_convergence_study, two_mesh_space_error, two_mesh_time_error};

use crate::schemes::SchemeError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },
    #[error("bad ladder: {0}")]
    Ladder(String),
    #[error("rate needs two positive errors, got {0} and {1}")]
    Rate(f64, f64),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl HarnessError {
    /// Whether the fault lies in the input rather than in a solve.
    pub fn is_config(&self) -> bool {
        matches!(self, HarnessError::Config { .. } | HarnessError::Ladder(_))
    }
}
