//! Graded time meshes `0 = t_0 < t_1 < ... < t_N = T` and their uniform
//! refinements.

use crate::error::{Error, Result};

/// Steps shorter than this fraction of the horizon are rejected.
pub const MIN_RELATIVE_STEP: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct TimeMesh {
    levels: Vec<f64>,
    gamma: Option<f64>,
}

impl TimeMesh {
    /// The standard graded mesh `t_n = (n/N)^gamma * T`.
    ///
    /// `gamma = 1` gives the uniform mesh.
    pub fn graded(intervals: usize, gamma: f64, horizon: f64) -> Result<Self> {
        if intervals < 2 {
            return Err(Error::InvalidMesh(format!(
                "need at least 2 intervals, got {intervals}"
            )));
        }
        if !(gamma >= 1.0) || !gamma.is_finite() {
            return Err(Error::InvalidMesh(format!("grading exponent {gamma} < 1")));
        }
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::InvalidMesh(format!("horizon {horizon} must be positive")));
        }
        let nf = intervals as f64;
        let mut levels: Vec<f64> = (0..=intervals)
            .map(|n| (n as f64 / nf).powf(gamma) * horizon)
            .collect();
        levels[intervals] = horizon;
        let mut mesh = Self::from_levels(levels)?;
        mesh.gamma = Some(gamma);
        Ok(mesh)
    }

    /// Builds a mesh from explicit levels; the first must be 0.
    pub fn from_levels(levels: Vec<f64>) -> Result<Self> {
        if levels.len() < 2 {
            return Err(Error::InvalidMesh("need at least one interval".into()));
        }
        if levels[0] != 0.0 {
            return Err(Error::InvalidMesh(format!("t_0 = {} must be 0", levels[0])));
        }
        let horizon = *levels.last().unwrap();
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::InvalidMesh(format!("horizon {horizon} must be positive")));
        }
        for (n, w) in levels.windows(2).enumerate() {
            if !(w[1] - w[0] > MIN_RELATIVE_STEP * horizon) {
                return Err(Error::InvalidMesh(format!(
                    "step k_{} = {:e} is below {:e}",
                    n + 1,
                    w[1] - w[0],
                    MIN_RELATIVE_STEP * horizon
                )));
            }
        }
        Ok(Self {
            levels,
            gamma: None,
        })
    }

    /// Number of intervals `N`.
    pub fn intervals(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// `t_n`, `0 <= n <= N`.
    pub fn level(&self, n: usize) -> f64 {
        self.levels[n]
    }

    /// The closed interval `[t_{n-1}, t_n]`, `1 <= n <= N`.
    pub fn interval(&self, n: usize) -> (f64, f64) {
        (self.levels[n - 1], self.levels[n])
    }

    /// `k_n = t_n - t_{n-1}`, `1 <= n <= N`.
    pub fn step(&self, n: usize) -> f64 {
        self.levels[n] - self.levels[n - 1]
    }

    pub fn steps(&self) -> Vec<f64> {
        self.levels.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Maximum step `k`.
    pub fn max_step(&self) -> f64 {
        self.levels
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    pub fn horizon(&self) -> f64 {
        *self.levels.last().unwrap()
    }

    /// Grading exponent, when the mesh came from [`TimeMesh::graded`].
    pub fn gamma(&self) -> Option<f64> {
        self.gamma
    }

    /// Index `n` of the interval `I_n` whose closure contains `t`, ties at
    /// interior levels resolved to the left interval.
    pub fn locate(&self, t: f64) -> Result<usize> {
        let horizon = self.horizon();
        if !(0.0..=horizon).contains(&t) {
            return Err(Error::Domain(format!("t = {t} outside [0, {horizon}]")));
        }
        let n = self.levels.partition_point(|&level| level < t);
        Ok(n.max(1))
    }

    /// Measures the grading assumptions against the given exponent.
    pub fn check_grading(&self, gamma: f64) -> GradingReport {
        let k = self.max_step();
        let horizon = self.horizon();
        let step_ratio = (1..=self.intervals())
            .map(|n| {
                let tn = self.level(n) / horizon;
                self.step(n) / (k * tn.powf(1.0 - 1.0 / gamma).min(1.0))
            })
            .fold(0.0, f64::max);
        let first_step_ratio = self.step(1) / (k / horizon).powf(gamma) / horizon;
        let quasi_uniformity = (3..=self.intervals())
            .map(|n| self.step(n) / self.step(n - 1))
            .fold(0.0, f64::max);
        GradingReport {
            gamma,
            step_ratio,
            first_step_ratio,
            quasi_uniformity,
        }
    }

    /// The fine grid `{t_{j-1} + l k_j / m}` used for discrete max norms.
    pub fn refine(&self, m: usize) -> Result<FineGrid> {
        if m == 0 {
            return Err(Error::Domain("refinement factor m must be >= 1".into()));
        }
        let mut points = Vec::with_capacity(self.intervals() * m + 1);
        points.push(self.levels[0]);
        for n in 1..=self.intervals() {
            let (a, b) = self.interval(n);
            let k = b - a;
            for l in 1..m {
                points.push(a + l as f64 * k / m as f64);
            }
            points.push(b);
        }
        Ok(FineGrid { points, m })
    }
}

/// Attained constants of the grading assumptions, measured on a unit-horizon
/// scale:
///
/// * `step_ratio = max_n k_n / (k min(1, t_n^{1-1/gamma}))`
/// * `first_step_ratio = k_1 / k^gamma`
/// * `quasi_uniformity = max_{n>=3} k_n / k_{n-1}`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradingReport {
    pub gamma: f64,
    pub step_ratio: f64,
    pub first_step_ratio: f64,
    pub quasi_uniformity: f64,
}

impl GradingReport {
    /// `k_n <= C k min(1, t_n^{1-1/gamma})` for all n.
    pub fn step_bound_holds(&self, upper: f64) -> bool {
        self.step_ratio <= upper * (1.0 + 1e-12)
    }

    /// `c k^gamma <= k_1 <= C k^gamma`.
    pub fn first_step_holds(&self, lower: f64, upper: f64) -> bool {
        self.first_step_ratio >= lower * (1.0 - 1e-12) && self.first_step_ratio <= upper * (1.0 + 1e-12)
    }

    /// `k_n <= lambda k_{n-1}` for `3 <= n <= N`.
    pub fn quasi_uniform_with(&self, lambda: f64) -> bool {
        self.quasi_uniformity <= lambda * (1.0 + 1e-12)
    }

    /// All three conditions, with the quasi-uniformity constant `2^gamma - 1`.
    pub fn passes(&self, lower: f64, upper: f64) -> bool {
        self.step_bound_holds(upper)
            && self.first_step_holds(lower, upper)
            && self.quasi_uniform_with(standard_lambda(self.gamma))
    }
}

/// Quasi-uniformity constant `2^gamma - 1` attained by the standard mesh.
pub fn standard_lambda(gamma: f64) -> f64 {
    2f64.powf(gamma) - 1.0
}

/// The point set `G^{N,m}`; `N m + 1` points, mesh levels included.
#[derive(Debug, Clone, PartialEq)]
pub struct FineGrid {
    points: Vec<f64>,
    m: usize,
}

impl FineGrid {
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
