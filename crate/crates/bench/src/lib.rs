//! Convergence benchmarks for the `fracdg` solver: single runs, parameter
//! sweeps, the published table and figure grids, and CSV/JSON output.

pub mod config;
pub mod output;
pub mod presets;
pub mod run;
pub mod sweep;

pub use config::{MSpace, Metric, Metrics, RunConfig, SweepConfig};
pub use output::{emit, Format};
pub use run::{run, Diagnostics, RunOutcome, RunReport};
pub use sweep::{run_cells, sweep, SweepOutcome};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl BenchError {
    /// 1 for configuration and i/o problems, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Config(_) | BenchError::Io(_) => 1,
            BenchError::Numerical(_) => 2,
        }
    }
}

impl From<fracdg::Error> for BenchError {
    fn from(e: fracdg::Error) -> Self {
        BenchError::Numerical(e.to_string())
    }
}

impl From<serde_json::Error> for BenchError {
    fn from(e: serde_json::Error) -> Self {
        BenchError::Config(format!("json: {e}"))
    }
}
