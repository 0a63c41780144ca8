//! The interpolation postprocessor built from the left limits `U^n_-`, and
//! the one-sided quasi-interpolants `Pi^-`, `Pi^+`.
//!
//! The postprocessed solution is linear on `I_1` and `I_2` and, for
//! `n >= 3`, the quadratic through the left limits at `t_{n-2}, t_{n-1}, t_n`.

use crate::dg::DgSolution;
use crate::error::{Error, Result};
use crate::mesh::TimeMesh;
use crate::quadrature::gauss_legendre;

#[derive(Debug, Clone)]
pub struct PostprocessedSolution {
    mesh: TimeMesh,
    nodal: Vec<Vec<f64>>,
}

impl PostprocessedSolution {
    /// Uses `U^0_-, ..., U^N_-` of a fully solved DG solution.
    pub fn from_solution(solution: &DgSolution) -> Result<Self> {
        if !solution.is_complete() {
            return Err(Error::MissingHistory {
                requested: solution.mesh().intervals(),
                available: solution.computed(),
            });
        }
        let nodal = (0..=solution.mesh().intervals())
            .map(|n| solution.left_limit(n).map(<[f64]>::to_vec))
            .collect::<Result<Vec<_>>>()?;
        Self::from_nodal(solution.mesh().clone(), nodal)
    }

    /// `nodal[n]` is the value at `t_n`, `0 <= n <= N`.
    pub fn from_nodal(mesh: TimeMesh, nodal: Vec<Vec<f64>>) -> Result<Self> {
        if mesh.intervals() < 2 {
            return Err(Error::InvalidMesh(
                "the postprocessor needs at least 2 intervals".into(),
            ));
        }
        if nodal.len() != mesh.intervals() + 1 {
            return Err(Error::DimensionMismatch {
                expected: mesh.intervals() + 1,
                found: nodal.len(),
            });
        }
        let dof = nodal[0].len();
        if let Some(bad) = nodal.iter().find(|v| v.len() != dof) {
            return Err(Error::DimensionMismatch {
                expected: dof,
                found: bad.len(),
            });
        }
        Ok(Self { mesh, nodal })
    }

    pub fn mesh(&self) -> &TimeMesh {
        &self.mesh
    }

    pub fn nodal(&self, n: usize) -> &[f64] {
        &self.nodal[n]
    }

    /// Lagrange weights of the stencil used on `I_n` at time `t`, paired
    /// with the level indices they multiply.
    fn stencil(&self, n: usize, t: f64) -> ([usize; 3], [f64; 3]) {
        let levels = self.mesh.levels();
        if n <= 2 {
            let (a, b) = (levels[n - 1], levels[n]);
            let lam1 = (t - a) / (b - a);
            return ([n - 1, n, n], [1.0 - lam1, lam1, 0.0]);
        }
        let (t0, t1, t2) = (levels[n - 2], levels[n - 1], levels[n]);
        let w0 = (t - t1) * (t - t2) / ((t0 - t1) * (t0 - t2));
        let w1 = (t - t0) * (t - t2) / ((t1 - t0) * (t1 - t2));
        let w2 = (t - t0) * (t - t1) / ((t2 - t0) * (t2 - t1));
        ([n - 2, n - 1, n], [w0, w1, w2])
    }

    /// Value at `t in [0, T]`; at interior levels the left interval's
    /// polynomial is used.
    pub fn eval(&self, t: f64) -> Result<Vec<f64>> {
        let n = self.mesh.locate(t)?;
        Ok(self.eval_in(n, t))
    }

    /// The polynomial of `I_n` evaluated at `t` (no range check).
    pub fn eval_in(&self, n: usize, t: f64) -> Vec<f64> {
        if t == self.mesh.level(n) {
            return self.nodal[n].clone();
        }
        if t == self.mesh.level(n - 1) {
            return self.nodal[n - 1].clone();
        }
        let (idx, w) = self.stencil(n, t);
        let mut out = vec![0.0; self.nodal[0].len()];
        for (&i, &wi) in idx.iter().zip(&w) {
            if wi != 0.0 {
                for (o, v) in out.iter_mut().zip(&self.nodal[i]) {
                    *o += wi * v;
                }
            }
        }
        out
    }
}

/// A scalar function that is linear on each mesh interval, stored as its
/// one-sided end values `(v(t_{n-1}^+), v(t_n^-))`.
#[derive(Debug, Clone)]
pub struct PiecewiseLinear {
    mesh: TimeMesh,
    ends: Vec<[f64; 2]>,
}

impl PiecewiseLinear {
    pub fn ends(&self, n: usize) -> [f64; 2] {
        self.ends[n - 1]
    }

    pub fn eval_in(&self, n: usize, t: f64) -> f64 {
        let (a, b) = self.mesh.interval(n);
        let lam1 = (t - a) / (b - a);
        let [v0, v1] = self.ends[n - 1];
        v0 * (1.0 - lam1) + v1 * lam1
    }
}

const MEAN_GAUSS_POINTS: usize = 16;

fn interval_mean<F: Fn(f64) -> f64>(v: &F, a: f64, b: f64) -> f64 {
    gauss_legendre(MEAN_GAUSS_POINTS).integrate(a, b, v) / (b - a)
}

/// `Pi^- v`: matches `v(t_n^-)` and the mean of `v` on each `I_n`.
pub fn pi_minus<F: Fn(f64) -> f64>(v: F, mesh: &TimeMesh) -> PiecewiseLinear {
    let ends = (1..=mesh.intervals())
        .map(|n| {
            let (a, b) = mesh.interval(n);
            let right = v(b);
            let mean = interval_mean(&v, a, b);
            [2.0 * mean - right, right]
        })
        .collect();
    PiecewiseLinear {
        mesh: mesh.clone(),
        ends,
    }
}

/// `Pi^+ v`: matches `v(t_{n-1}^+)` and the mean of `v` on each `I_n`.
pub fn pi_plus<F: Fn(f64) -> f64>(v: F, mesh: &TimeMesh) -> PiecewiseLinear {
    let ends = (1..=mesh.intervals())
        .map(|n| {
            let (a, b) = mesh.interval(n);
            let left = v(a);
            let mean = interval_mean(&v, a, b);
            [left, 2.0 * mean - left]
        })
        .collect();
    PiecewiseLinear {
        mesh: mesh.clone(),
        ends,
    }
}
