use std::sync::Arc;
use std::time::Instant;

use fracdg::{
    global_pp_error, nodal_errors, residual_gn, solve, stability_check, ExactSolution, FracOrder,
    PostprocessedSolution, ProblemSpec, SpatialGrid, TimeMesh,
};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::output::sig6;
use crate::BenchError;

/// One row of a convergence table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    #[serde(serialize_with = "sig6::serialize")]
    pub alpha: f64,
    #[serde(serialize_with = "sig6::serialize")]
    pub gamma: f64,
    #[serde(rename = "N")]
    pub intervals: usize,
    #[serde(rename = "M")]
    pub subintervals: usize,
    #[serde(serialize_with = "sig6::serialize_opt")]
    pub left_nodal: Option<f64>,
    #[serde(serialize_with = "sig6::serialize_opt")]
    pub left_rate: Option<f64>,
    #[serde(serialize_with = "sig6::serialize_opt")]
    pub right_nodal: Option<f64>,
    #[serde(serialize_with = "sig6::serialize_opt")]
    pub right_rate: Option<f64>,
    #[serde(serialize_with = "sig6::serialize_opt")]
    pub pp_global: Option<f64>,
    #[serde(serialize_with = "sig6::serialize_opt")]
    pub pp_rate: Option<f64>,
    #[serde(serialize_with = "sig6::serialize")]
    pub seconds: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Self-checks of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    /// Relative residual of the global DG equations.
    pub residual: f64,
    /// `max ||U||^2` over the fine grid and its bound `8 |<U^0_-, U^0_+>|`.
    pub max_energy: f64,
    pub energy_bound: f64,
}

impl Diagnostics {
    pub fn stable(&self) -> bool {
        self.max_energy <= self.energy_bound * (1.0 + 1e-12) + 1e-300
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: RunReport,
    pub diagnostics: Option<Diagnostics>,
}

impl RunReport {
    pub(crate) fn failed(config: &RunConfig, message: String) -> Self {
        Self {
            alpha: config.alpha,
            gamma: config.gamma,
            intervals: config.intervals,
            subintervals: config.subintervals(),
            left_nodal: None,
            left_rate: None,
            right_nodal: None,
            right_rate: None,
            pp_global: None,
            pp_rate: None,
            seconds: 0.0,
            error: Some(message),
        }
    }
}

/// Solves the model problem, postprocesses and measures the errors.
pub fn run(config: &RunConfig) -> Result<RunOutcome, BenchError> {
    config.validate()?;
    let start = Instant::now();
    let order = FracOrder::new(config.alpha)?;
    let grid = SpatialGrid::new(config.subintervals())?;
    let mesh = TimeMesh::graded(config.intervals, config.gamma, config.horizon)?;
    let amplitude = config.amplitude;
    let problem = ProblemSpec::new(
        order,
        grid,
        Arc::new(move |x| amplitude * x * (1.0 - x)),
        None,
    )?;
    let solution = solve(&problem, &mesh)?;
    let exact = ExactSolution::new(order).scaled(amplitude);

    let mut report = RunReport::failed(config, String::new());
    report.error = None;
    if config.metrics.left || config.metrics.right {
        let nodal = nodal_errors(&solution, &exact, config.left_from.into())?;
        report.left_nodal = config.metrics.left.then_some(nodal.left);
        report.right_nodal = config.metrics.right.then_some(nodal.right);
    }
    if config.metrics.pp {
        let pp = PostprocessedSolution::from_solution(&solution)?;
        report.pp_global = Some(global_pp_error(&pp, &exact, &grid, config.fine_m)?);
    }
    let diagnostics = if config.verify {
        let stability = stability_check(&solution, config.fine_m)?;
        let diagnostics = Diagnostics {
            residual: residual_gn(&solution, &problem)?,
            max_energy: stability.max_energy,
            energy_bound: stability.bound,
        };
        if !diagnostics.stable() {
            return Err(BenchError::Numerical(format!(
                "energy bound violated: {:e} > {:e}",
                diagnostics.max_energy, diagnostics.energy_bound
            )));
        }
        Some(diagnostics)
    } else {
        None
    };
    for value in [report.left_nodal, report.right_nodal, report.pp_global].into_iter().flatten() {
        if !value.is_finite() {
            return Err(BenchError::Numerical("non-finite error measure".into()));
        }
    }
    report.seconds = start.elapsed().as_secs_f64();
    Ok(RunOutcome {
        report,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Metrics;

    #[test]
    fn zero_data_gives_zero_report() {
        let config = RunConfig {
            amplitude: 0.0,
            ..RunConfig::new(-0.5, 2.0, 2)
        };
        let outcome = run(&config).unwrap();
        assert_eq!(outcome.report.left_nodal, Some(0.0));
        assert_eq!(outcome.report.right_nodal, Some(0.0));
        assert_eq!(outcome.report.pp_global, Some(0.0));
        assert_eq!(outcome.report.subintervals, 3);
    }

    #[test]
    fn metrics_can_be_skipped() {
        let config = RunConfig {
            metrics: Metrics {
                left: true,
                right: false,
                pp: false,
            },
            ..RunConfig::new(0.3, 1.5, 8)
        };
        let outcome = run(&config).unwrap();
        assert!(outcome.report.left_nodal.unwrap() > 0.0);
        assert!(outcome.report.right_nodal.is_none());
        assert!(outcome.report.pp_global.is_none());
        let d = outcome.diagnostics.unwrap();
        assert!(d.residual < 1e-9 && d.stable());
    }

    #[test]
    fn invalid_config_is_a_config_error() {
        let err = run(&RunConfig::new(0.3, 0.5, 8)).unwrap_err();
        assert!(matches!(err, BenchError::Config(_)));
        assert_eq!(err.exit_code(), 1);
    }
}
