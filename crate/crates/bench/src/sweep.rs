use rayon::prelude::*;

use crate::config::{RunConfig, SweepConfig};
use crate::run::{run, Diagnostics, RunReport};
use crate::BenchError;

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub reports: Vec<RunReport>,
    /// Per row, when the cell succeeded and was verified.
    pub diagnostics: Vec<Option<Diagnostics>>,
}

impl SweepOutcome {
    pub fn failures(&self) -> impl Iterator<Item = &RunReport> {
        self.reports.iter().filter(|r| r.error.is_some())
    }
}

/// Runs every cell, at most `jobs` at a time. A failing cell is recorded in
/// its row and the sweep continues.
pub fn run_cells(cells: &[RunConfig], jobs: usize) -> Result<SweepOutcome, BenchError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| BenchError::Config(format!("jobs: {e}")))?;
    let results: Vec<_> = pool.install(|| {
        cells
            .par_iter()
            .map(|cell| match run(cell) {
                Ok(outcome) => (outcome.report, outcome.diagnostics),
                Err(e) => (RunReport::failed(cell, e.to_string()), None),
            })
            .collect()
    });
    let (mut reports, diagnostics): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    fill_rates(&mut reports);
    Ok(SweepOutcome {
        reports,
        diagnostics,
    })
}

pub fn sweep(config: &SweepConfig) -> Result<SweepOutcome, BenchError> {
    config.validate()?;
    run_cells(&config.cells(), config.jobs)
}

/// Rates between consecutive rows of the same `(alpha, gamma)` column whose
/// `N` doubles.
pub fn fill_rates(reports: &mut [RunReport]) {
    for i in 1..reports.len() {
        let (before, after) = reports.split_at_mut(i);
        let coarse = &before[i - 1];
        let fine = &mut after[0];
        if coarse.alpha != fine.alpha
            || coarse.gamma != fine.gamma
            || fine.intervals != 2 * coarse.intervals
        {
            continue;
        }
        let rate = |c: Option<f64>, f: Option<f64>| match (c, f) {
            (Some(c), Some(f)) => fracdg::observed_rate(c, f).ok(),
            _ => None,
        };
        fine.left_rate = rate(coarse.left_nodal, fine.left_nodal);
        fine.right_rate = rate(coarse.right_nodal, fine.right_nodal);
        fine.pp_rate = rate(coarse.pp_global, fine.pp_global);
    }
}
