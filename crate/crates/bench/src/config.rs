use serde::{Deserialize, Serialize};

use crate::BenchError;

/// Number of spatial subintervals: fixed, or `ceil(N^{3/2})` so that
/// `h^2` and `k^3` balance on a uniform mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "MSpaceRepr", into = "MSpaceRepr")]
pub enum MSpace {
    #[default]
    Auto,
    Fixed(usize),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum MSpaceRepr {
    Word(String),
    Count(usize),
}

impl TryFrom<MSpaceRepr> for MSpace {
    type Error = String;

    fn try_from(repr: MSpaceRepr) -> Result<Self, String> {
        match repr {
            MSpaceRepr::Count(m) => Ok(MSpace::Fixed(m)),
            MSpaceRepr::Word(w) => w.parse(),
        }
    }
}

impl From<MSpace> for MSpaceRepr {
    fn from(m: MSpace) -> Self {
        match m {
            MSpace::Auto => MSpaceRepr::Word("auto".into()),
            MSpace::Fixed(m) => MSpaceRepr::Count(m),
        }
    }
}

impl std::str::FromStr for MSpace {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(MSpace::Auto);
        }
        s.parse()
            .map(MSpace::Fixed)
            .map_err(|_| format!("expected `auto` or a subinterval count, got `{s}`"))
    }
}

impl MSpace {
    pub fn resolve(self, intervals: usize) -> usize {
        match self {
            MSpace::Fixed(m) => m,
            MSpace::Auto => auto_subintervals(intervals),
        }
    }
}

/// `ceil(N^{3/2})`, computed exactly.
pub fn auto_subintervals(intervals: usize) -> usize {
    let cube = (intervals as u128).pow(3);
    let mut m = (cube as f64).sqrt() as u128;
    while m * m < cube {
        m += 1;
    }
    while m > 0 && (m - 1) * (m - 1) >= cube {
        m -= 1;
    }
    m as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Left,
    Right,
    Pp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metrics {
    pub left: bool,
    pub right: bool,
    pub pp: bool,
}

impl Default for Metrics {
    fn default() -> Self {
        Self::all()
    }
}

impl Metrics {
    pub fn all() -> Self {
        Self {
            left: true,
            right: true,
            pp: true,
        }
    }

    pub fn only(metric: Metric) -> Self {
        Self::from_list(&[metric])
    }

    pub fn from_list(list: &[Metric]) -> Self {
        Self {
            left: list.contains(&Metric::Left),
            right: list.contains(&Metric::Right),
            pp: list.contains(&Metric::Pp),
        }
    }
}

/// Levels entering the left nodal error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeftFrom {
    /// `1 <= n <= N`, as in the tables.
    #[default]
    First,
    /// `0 <= n <= N`, as in the figures.
    Initial,
}

impl From<LeftFrom> for fracdg::LeftRange {
    fn from(l: LeftFrom) -> Self {
        match l {
            LeftFrom::First => fracdg::LeftRange::FromFirst,
            LeftFrom::Initial => fracdg::LeftRange::FromInitial,
        }
    }
}

/// One model-problem run: `u_0 = amplitude * x(1 - x)`, `f = 0` on `(0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub alpha: f64,
    pub gamma: f64,
    pub intervals: usize,
    pub mspace: MSpace,
    pub horizon: f64,
    pub fine_m: usize,
    pub metrics: Metrics,
    pub left_from: LeftFrom,
    pub amplitude: f64,
    /// Also evaluate the Galerkin residual and the energy bound.
    pub verify: bool,
}

impl RunConfig {
    pub fn new(alpha: f64, gamma: f64, intervals: usize) -> Self {
        Self {
            alpha,
            gamma,
            intervals,
            mspace: MSpace::Auto,
            horizon: 1.0,
            fine_m: 12,
            metrics: Metrics::all(),
            left_from: LeftFrom::First,
            amplitude: 1.0,
            verify: true,
        }
    }

    pub fn subintervals(&self) -> usize {
        self.mspace.resolve(self.intervals)
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |field: &str, why: String| Err(BenchError::Config(format!("{field}: {why}")));
        if !(self.alpha > -1.0 && self.alpha < 1.0) {
            return bad("alpha", format!("{} is outside (-1, 1)", self.alpha));
        }
        if !(self.gamma >= 1.0) || !self.gamma.is_finite() {
            return bad("gamma", format!("{} must be a finite value >= 1", self.gamma));
        }
        if self.intervals < 2 {
            return bad("nsteps", format!("{} must be at least 2", self.intervals));
        }
        if self.subintervals() < 2 {
            return bad("mspace", format!("{} must be at least 2", self.subintervals()));
        }
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return bad("horizon", format!("{} must be positive", self.horizon));
        }
        if self.fine_m == 0 {
            return bad("fine_m", "must be at least 1".into());
        }
        if !self.amplitude.is_finite() {
            return bad("amplitude", format!("{} must be finite", self.amplitude));
        }
        Ok(())
    }
}

fn default_horizon() -> f64 {
    1.0
}

fn default_fine_m() -> usize {
    12
}

fn default_metrics() -> Vec<Metric> {
    vec![Metric::Left, Metric::Right, Metric::Pp]
}

fn default_jobs() -> usize {
    1
}

/// Cartesian product of parameters, enumerated `alpha`, then `gamma`, then `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub alphas: Vec<f64>,
    pub gammas: Vec<f64>,
    #[serde(rename = "N")]
    pub intervals: Vec<usize>,
    #[serde(default)]
    pub mspace: MSpace,
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    #[serde(default = "default_fine_m")]
    pub fine_m: usize,
    #[serde(default = "default_metrics")]
    pub metrics: Vec<Metric>,
    #[serde(default)]
    pub left_from: LeftFrom,
    #[serde(default = "default_jobs")]
    pub jobs: usize,
}

impl SweepConfig {
    pub fn cells(&self) -> Vec<RunConfig> {
        let mut cells = Vec::new();
        for &alpha in &self.alphas {
            for &gamma in &self.gammas {
                for &intervals in &self.intervals {
                    cells.push(RunConfig {
                        mspace: self.mspace,
                        horizon: self.horizon,
                        fine_m: self.fine_m,
                        metrics: Metrics::from_list(&self.metrics),
                        left_from: self.left_from,
                        ..RunConfig::new(alpha, gamma, intervals)
                    });
                }
            }
        }
        cells
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.jobs == 0 {
            return Err(BenchError::Config("jobs: must be at least 1".into()));
        }
        self.cells().iter().try_for_each(RunConfig::validate)
    }
}
