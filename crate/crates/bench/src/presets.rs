//! Parameter grids of the published convergence tables and figures, with
//! the published values for comparison.

use crate::config::{LeftFrom, MSpace, Metric, SweepConfig};

/// One published table: errors `values[g][i]` for `gammas[g]` and
/// `TABLE_N[i]`, rates for `i >= 1`.
#[derive(Debug, Clone, Copy)]
pub struct PublishedTable {
    pub which: u8,
    pub alpha: f64,
    pub metric: Metric,
    pub gammas: &'static [f64],
    pub values: &'static [[f64; 4]],
    pub rates: &'static [[f64; 3]],
}

pub const TABLE_N: [usize; 4] = [20, 40, 80, 160];

pub const TABLES: [PublishedTable; 6] = [
    PublishedTable {
        which: 1,
        alpha: -0.3,
        metric: Metric::Left,
        gammas: &[1.0, 2.0, 3.0, 3.25],
        values: &[
            [2.01e-3, 8.61e-4, 3.90e-4, 2.21e-4],
            [1.08e-4, 3.15e-5, 9.33e-6, 2.77e-6],
            [6.39e-5, 1.09e-5, 1.81e-6, 2.92e-7],
            [6.39e-5, 1.10e-5, 1.82e-6, 2.94e-7],
        ],
        rates: &[
            [1.220, 1.143, 0.821],
            [1.780, 1.758, 1.753],
            [2.546, 2.596, 2.632],
            [2.535, 2.595, 2.632],
        ],
    },
    PublishedTable {
        which: 2,
        alpha: -0.3,
        metric: Metric::Right,
        gammas: &[1.0, 2.0, 3.0, 3.25],
        values: &[
            [4.74e-2, 3.05e-2, 1.89e-2, 1.16e-2],
            [6.03e-3, 2.26e-3, 8.51e-4, 3.21e-4],
            [1.63e-3, 4.18e-4, 1.06e-4, 2.66e-5],
            [1.52e-3, 3.91e-4, 9.89e-5, 2.49e-5],
        ],
        rates: &[
            [0.636, 0.689, 0.710],
            [1.416, 1.410, 1.406],
            [1.966, 1.982, 1.990],
            [1.964, 1.982, 1.989],
        ],
    },
    PublishedTable {
        which: 3,
        alpha: 0.3,
        metric: Metric::Left,
        gammas: &[1.0, 1.5, 1.75, 2.0],
        values: &[
            [2.10e-4, 6.77e-5, 2.19e-5, 7.11e-6],
            [2.08e-5, 3.61e-6, 6.43e-7, 1.17e-7],
            [1.21e-5, 1.61e-6, 2.13e-7, 2.80e-8],
            [1.23e-5, 1.57e-6, 1.99e-7, 2.53e-8],
        ],
        rates: &[
            [1.632, 1.636, 1.625],
            [2.527, 2.486, 2.461],
            [2.904, 2.917, 2.930],
            [2.966, 2.983, 2.972],
        ],
    },
    PublishedTable {
        which: 4,
        alpha: 0.3,
        metric: Metric::Right,
        gammas: &[1.0, 1.5, 1.75],
        values: &[
            [3.265e-3, 1.536e-3, 6.726e-4, 2.851e-4],
            [8.548e-4, 2.165e-4, 5.432e-5, 1.361e-5],
            [9.207e-4, 2.338e-4, 5.873e-5, 1.472e-5],
        ],
        rates: &[
            [1.088, 1.191, 1.238],
            [1.982, 1.995, 1.997],
            [1.977, 1.993, 1.996],
        ],
    },
    PublishedTable {
        which: 5,
        alpha: -0.3,
        metric: Metric::Pp,
        gammas: &[1.0, 2.0, 3.0, 3.9],
        values: &[
            [3.79e-2, 2.37e-2, 1.44e-2, 8.74e-3],
            [4.52e-3, 1.68e-3, 6.31e-4, 2.38e-4],
            [1.46e-3, 3.27e-4, 7.49e-5, 1.73e-5],
            [8.13e-4, 1.20e-4, 1.79e-5, 2.69e-6],
        ],
        rates: &[
            [0.675, 0.716, 0.724],
            [1.425, 1.416, 1.410],
            [2.154, 2.127, 2.113],
            [2.763, 2.743, 2.735],
        ],
    },
    PublishedTable {
        which: 6,
        alpha: 0.3,
        metric: Metric::Pp,
        gammas: &[1.0, 1.5, 2.0, 2.35],
        values: &[
            [2.51e-3, 1.16e-3, 5.02e-4, 2.12e-4],
            [4.38e-4, 1.22e-4, 3.34e-5, 8.88e-6],
            [1.56e-4, 2.72e-5, 4.59e-6, 7.63e-7],
            [1.89e-4, 2.29e-5, 2.80e-6, 3.44e-7],
        ],
        rates: &[
            [1.120, 1.205, 1.245],
            [1.845, 1.867, 1.911],
            [2.515, 2.568, 2.588],
            [3.046, 3.029, 3.024],
        ],
    },
];

pub fn published_table(which: u8) -> Option<&'static PublishedTable> {
    TABLES.iter().find(|t| t.which == which)
}

impl PublishedTable {
    pub fn sweep(&self, jobs: usize) -> SweepConfig {
        SweepConfig {
            alphas: vec![self.alpha],
            gammas: self.gammas.to_vec(),
            intervals: TABLE_N.to_vec(),
            mspace: MSpace::Auto,
            horizon: 1.0,
            fine_m: 12,
            metrics: vec![self.metric],
            left_from: LeftFrom::First,
            jobs,
        }
    }
}

/// Figure sweeps at `N = 64`, `M = 512` with the left nodal error over
/// `0 <= n <= N`: figure 1 varies `gamma` for four values of `alpha`,
/// figure 2 varies `alpha` in `[-0.9, 0.9]` for four gradings.
///
/// The `gamma` grid stops at 7.75: at `gamma = 8` the first step
/// `64^-8 ~ 3.6e-15` falls under the minimum step the mesh accepts.
pub fn figure(which: u8, jobs: usize) -> Option<SweepConfig> {
    let (alphas, gammas) = match which {
        1 => (
            vec![-0.8, -0.4, 0.2, 0.6],
            (0..=27).map(|i| 1.0 + 0.25 * i as f64).collect(),
        ),
        2 => (
            (0..=18).map(|i| round1(-0.9 + 0.1 * i as f64)).collect(),
            vec![1.0, 2.0, 3.0, 4.0],
        ),
        _ => return None,
    };
    Some(SweepConfig {
        alphas,
        gammas,
        intervals: vec![64],
        mspace: MSpace::Fixed(512),
        horizon: 1.0,
        fine_m: 12,
        metrics: vec![Metric::Left],
        left_from: LeftFrom::Initial,
        jobs,
    })
}

fn round1(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}
