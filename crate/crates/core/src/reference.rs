//! Exact solution of the model problem and the error measures of the
//! convergence study.
//!
//! For `u_0 = x(1-x)` and `f = 0`,
//!
//! ```text
//! u(x, t) = 8 sum_{n>=0} w_n^{-3} sin(w_n x) E_{1+alpha}(-w_n^2 t^{1+alpha}),  w_n = (2n+1) pi.
//! ```
//!
//! The series is cut where its L2 tail, bounded with `|E_{1+alpha}(-x)| <= 1`,
//! drops below the requested tolerance, and per time level it is trimmed
//! further using the actual coefficient sizes.

use std::f64::consts::PI;

use crate::dg::DgSolution;
use crate::error::{Error, Result};
use crate::fem::SpatialGrid;
use crate::kernel::{mittag_leffler, FracOrder};
use crate::postprocess::PostprocessedSolution;

/// Default bound on the L2 truncation error of the series.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactSolution {
    order: FracOrder,
    tolerance: f64,
    cutoff: usize,
    amplitude: f64,
}

fn frequency(n: usize) -> f64 {
    (2 * n + 1) as f64 * PI
}

/// `sum_{n > cutoff} w_n^{-p}` bounded by the integral test.
fn tail_sum(cutoff: usize, p: f64) -> f64 {
    let w = frequency(cutoff + 1);
    w.powf(-p) + w.powf(1.0 - p) / (2.0 * PI * (p - 1.0))
}

impl ExactSolution {
    pub fn new(order: FracOrder) -> Self {
        Self::with_tolerance(order, DEFAULT_TOLERANCE).expect("default tolerance is valid")
    }

    pub fn with_tolerance(order: FracOrder, tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0) {
            return Err(Error::Domain(format!("tolerance {tolerance} must be positive")));
        }
        // ||sum_{n>N} c_n sin(w_n x)||^2 = sum c_n^2 / 2 <= 32 sum w_n^{-6}
        let mut cutoff = 0;
        while (32.0 * tail_sum(cutoff, 6.0)).sqrt() > tolerance {
            cutoff += 1;
        }
        Ok(Self {
            order,
            tolerance,
            cutoff,
            amplitude: 1.0,
        })
    }

    /// The solution for initial data `amplitude * x(1 - x)`.
    pub fn scaled(self, amplitude: f64) -> Self {
        Self { amplitude, ..self }
    }

    pub fn order(&self) -> FracOrder {
        self.order
    }

    /// Index of the last series term kept.
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Bound on the L2 truncation error at any time.
    pub fn l2_tail_bound(&self) -> f64 {
        self.amplitude.abs() * (32.0 * tail_sum(self.cutoff, 6.0)).sqrt()
    }

    /// Bound on the pointwise truncation error at any time.
    pub fn sup_tail_bound(&self) -> f64 {
        self.amplitude.abs() * 8.0 * tail_sum(self.cutoff, 3.0)
    }

    /// Series coefficients `c_n(t)`, trimmed so the dropped terms have L2
    /// norm at most a tenth of the tolerance.
    pub fn coefficients(&self, t: f64) -> Result<Vec<f64>> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!("t = {t} must be non-negative")));
        }
        let nu = self.order.mittag_leffler_order();
        let scale = t.powf(nu);
        let mut coeffs = Vec::with_capacity(self.cutoff + 1);
        for n in 0..=self.cutoff {
            let w = frequency(n);
            coeffs.push(self.amplitude * 8.0 / (w * w * w) * mittag_leffler(nu, -w * w * scale)?);
        }
        let budget = (0.1 * self.tolerance * self.amplitude.abs()).powi(2);
        let mut dropped = 0.0;
        while let Some(&last) = coeffs.last() {
            let next = dropped + 0.5 * last * last;
            if next > budget {
                break;
            }
            dropped = next;
            coeffs.pop();
        }
        Ok(coeffs)
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn profile(&self, t: f64) -> Result<Profile> {
        Ok(Profile {
            coeffs: self.coefficients(t)?,
        })
    }

    /// `u(x, t)`.
    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain(format!("x = {x} outside [0, 1]")));
        }
        Ok(self.profile(t)?.eval(x))
    }
}

/// `u(., t)` at one fixed time as a truncated sine series.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    coeffs: Vec<f64>,
}

impl Profile {
    pub fn terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Clenshaw summation of `sum c_n sin((2n+1) theta)`, `theta = pi x`.
    pub fn eval(&self, x: f64) -> f64 {
        let theta = PI * x;
        self.eval_with(theta.sin(), 2.0 * (2.0 * theta).cos())
    }

    #[inline]
    fn eval_with(&self, sin_theta: f64, two_cos: f64) -> f64 {
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs.iter().skip(1).rev() {
            let b = c + two_cos * b1 - b2;
            b2 = b1;
            b1 = b;
        }
        let Some(&c0) = self.coeffs.first() else {
            return 0.0;
        };
        let b0 = c0 + two_cos * b1 - b2;
        (b0 + b1) * sin_theta
    }
}

/// Spatial quadrature points of a grid with the trigonometric data the
/// series evaluation needs.
#[derive(Debug, Clone)]
pub struct ErrorQuadrature {
    grid: SpatialGrid,
    weights: Vec<f64>,
    sin_theta: Vec<f64>,
    two_cos: Vec<f64>,
}

impl ErrorQuadrature {
    pub fn new(grid: &SpatialGrid) -> Self {
        let points = grid.quadrature_points();
        let weights = points.iter().map(|&(_, w)| w).collect();
        let sin_theta = points.iter().map(|&(x, _)| (PI * x).sin()).collect();
        let two_cos = points.iter().map(|&(x, _)| 2.0 * (2.0 * PI * x).cos()).collect();
        Self {
            grid: *grid,
            weights,
            sin_theta,
            two_cos,
        }
    }

    /// `||U_h - u(., t)||_{L2}` for finite element coefficients `coeffs`.
    pub fn l2_error(&self, coeffs: &[f64], profile: &Profile) -> f64 {
        let values = self.grid.values_at_quadrature_points(coeffs);
        let mut sum = 0.0;
        for (i, &u) in values.iter().enumerate() {
            let e = u - profile.eval_with(self.sin_theta[i], self.two_cos[i]);
            sum += self.weights[i] * e * e;
        }
        sum.sqrt()
    }
}

/// Which levels enter the left nodal error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LeftRange {
    /// `1 <= n <= N`.
    #[default]
    FromFirst,
    /// `0 <= n <= N`, including the projected initial datum.
    FromInitial,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NodalErrors {
    /// `max_n ||U^n_- - u(t_n)||`.
    pub left: f64,
    /// `max_{0 <= n <= N-1} ||U^n_+ - u(t_n)||`.
    pub right: f64,
}

pub fn nodal_errors(
    solution: &DgSolution,
    exact: &ExactSolution,
    range: LeftRange,
) -> Result<NodalErrors> {
    let quad = ErrorQuadrature::new(solution.grid());
    let mesh = solution.mesh();
    let mut errors = NodalErrors::default();
    for n in 0..=solution.computed() {
        let profile = exact.profile(mesh.level(n))?;
        if n > 0 || range == LeftRange::FromInitial {
            errors.left = errors.left.max(quad.l2_error(solution.left_limit(n)?, &profile));
        }
        if n < solution.computed() {
            errors.right = errors.right.max(quad.l2_error(solution.right_limit(n)?, &profile));
        }
    }
    Ok(errors)
}

/// `max_{t in G^{N,m}} ||U#(t) - u(t)||`.
pub fn global_pp_error(pp: &PostprocessedSolution, exact: &ExactSolution, grid: &SpatialGrid, m: usize) -> Result<f64> {
    let quad = ErrorQuadrature::new(grid);
    let fine = pp.mesh().refine(m)?;
    let mut worst = 0.0_f64;
    for &t in fine.points() {
        let profile = exact.profile(t)?;
        worst = worst.max(quad.l2_error(&pp.eval(t)?, &profile));
    }
    Ok(worst)
}

/// `log2(coarse / fine)`.
pub fn observed_rate(coarse: f64, fine: f64) -> Result<f64> {
    if !(coarse > 0.0 && fine > 0.0) {
        return Err(Error::Domain(format!(
            "rates need positive errors, got {coarse} and {fine}"
        )));
    }
    Ok((coarse / fine).log2())
}
