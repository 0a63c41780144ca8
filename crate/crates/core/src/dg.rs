//! Piecewise-linear discontinuous Galerkin time stepping for
//! `u' + B_alpha A u = f`, `u(0) = u_0`, with P1 elements in space.
//!
//! On each interval the unknowns are the one-sided traces
//! `(U^{n-1}_+, U^n_-)`; testing with the two local shapes gives
//!
//! ```text
//! b = 0:  ( M/2 + kappa_00 K) U0 + ( M/2 + kappa_10 K) U1 = M U^{n-1}_- + F_0 - H_0
//! b = 1:  (-M/2 + kappa_01 K) U0 + ( M/2 + kappa_11 K) U1 = F_1 - H_1
//! ```
//!
//! with `kappa = kappa^{n,n}` and `H_b` the history load of earlier intervals.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fem::{
    assemble_mass, assemble_stiffness, l2_project, solve_block2, Block2System, BlockCoeff,
    SpatialGrid, TriMatrix,
};
use crate::kernel::{memory_load, memory_weights, FracOrder, MemoryWeights};
use crate::mesh::TimeMesh;
use crate::quadrature::gauss_legendre;

pub type InitialData = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type Source = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Gauss points per time interval for the source term.
pub const SOURCE_GAUSS_POINTS: usize = 4;

#[derive(Clone)]
pub struct ProblemSpec {
    order: FracOrder,
    grid: SpatialGrid,
    initial: InitialData,
    /// `f(x, t)`; `None` means `f = 0`.
    source: Option<Source>,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("order", &self.order)
            .field("grid", &self.grid)
            .field("source", &self.source.is_some())
            .finish_non_exhaustive()
    }
}

impl ProblemSpec {
    pub fn new(
        order: FracOrder,
        grid: SpatialGrid,
        initial: InitialData,
        source: Option<Source>,
    ) -> Result<Self> {
        let (left, right) = (initial(0.0), initial(1.0));
        if left.abs() > 1e-14 || right.abs() > 1e-14 {
            return Err(Error::Domain(format!(
                "initial data must vanish on the boundary, got u0(0) = {left}, u0(1) = {right}"
            )));
        }
        Ok(Self {
            order,
            grid,
            initial,
            source,
        })
    }

    /// `u_0 = x(1 - x)`, `f = 0`.
    pub fn model(order: FracOrder, grid: SpatialGrid) -> Self {
        Self {
            order,
            grid,
            initial: Arc::new(|x| x * (1.0 - x)),
            source: None,
        }
    }

    pub fn order(&self) -> FracOrder {
        self.order
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn initial(&self) -> &InitialData {
        &self.initial
    }

    pub fn source(&self) -> Option<&Source> {
        self.source.as_ref()
    }

    /// Same problem with the initial data scaled by `factor`.
    pub fn with_scaled_data(&self, factor: f64) -> Self {
        let initial = Arc::clone(&self.initial);
        let source = self.source.clone().map(|f| -> Source {
            Arc::new(move |x, t| factor * f(x, t))
        });
        Self {
            initial: Arc::new(move |x| factor * initial(x)),
            source,
            ..self.clone()
        }
    }

    /// `(∫ <f, lambda_0>, ∫ <f, lambda_1>)` over `I_n`.
    fn source_loads(&self, mesh: &TimeMesh, n: usize) -> Option<[Vec<f64>; 2]> {
        let f = self.source.as_ref()?;
        let (ta, tb) = mesh.interval(n);
        let k = tb - ta;
        let dof = self.grid.dof();
        let mut loads = [vec![0.0; dof], vec![0.0; dof]];
        for (t, w) in gauss_legendre(SOURCE_GAUSS_POINTS).mapped(ta, tb) {
            let lam1 = (t - ta) / k;
            let load = self.grid.load_vector(|x| f(x, t));
            for i in 0..dof {
                loads[0][i] += w * (1.0 - lam1) * load[i];
                loads[1][i] += w * lam1 * load[i];
            }
        }
        Some(loads)
    }
}

/// Which one-sided limit to take at a mesh level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// The fully discrete DG solution: the projected initial datum and the
/// trace pair `(U^{n-1}_+, U^n_-)` of every computed interval.
#[derive(Debug, Clone)]
pub struct DgSolution {
    mesh: TimeMesh,
    grid: SpatialGrid,
    initial: Vec<f64>,
    intervals: Vec<[Vec<f64>; 2]>,
}

impl DgSolution {
    pub fn mesh(&self) -> &TimeMesh {
        &self.mesh
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    /// Number of intervals solved so far.
    pub fn computed(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_complete(&self) -> bool {
        self.intervals.len() == self.mesh.intervals()
    }

    /// `(U^{n-1}_+, U^n_-)` for `1 <= n <= computed()`.
    pub fn traces(&self, n: usize) -> Result<&[Vec<f64>; 2]> {
        if n == 0 || n > self.intervals.len() {
            return Err(Error::IndexOutOfRange {
                index: n,
                max: self.intervals.len(),
            });
        }
        Ok(&self.intervals[n - 1])
    }

    /// All trace pairs in interval order.
    pub fn history(&self) -> &[[Vec<f64>; 2]] {
        &self.intervals
    }

    /// `U^n_-`; `n = 0` is the projected initial datum.
    pub fn left_limit(&self, n: usize) -> Result<&[f64]> {
        if n == 0 {
            return Ok(&self.initial);
        }
        Ok(&self.traces(n)?[1])
    }

    /// `U^n_+` for `0 <= n < computed()`.
    pub fn right_limit(&self, n: usize) -> Result<&[f64]> {
        Ok(&self.traces(n + 1)?[0])
    }

    /// `U(t)` on the interior of `I_n`, or its affine extension to the
    /// closed interval.
    pub fn eval_in(&self, n: usize, t: f64) -> Result<Vec<f64>> {
        let [u0, u1] = self.traces(n)?;
        let (ta, tb) = self.mesh.interval(n);
        if !(ta..=tb).contains(&t) {
            return Err(Error::Domain(format!("t = {t} outside I_{n} = [{ta}, {tb}]")));
        }
        let lam1 = (t - ta) / (tb - ta);
        Ok(u0
            .iter()
            .zip(u1)
            .map(|(a, b)| a * (1.0 - lam1) + b * lam1)
            .collect())
    }

    /// `U(t)`; at a mesh level the requested one-sided limit is returned.
    pub fn eval(&self, t: f64, side: Side) -> Result<Vec<f64>> {
        let levels = self.mesh.levels();
        if let Some(n) = levels.iter().position(|&level| level == t) {
            return match side {
                Side::Left => self.left_limit(n).map(<[f64]>::to_vec),
                Side::Right => self.right_limit(n).map(<[f64]>::to_vec),
            };
        }
        let n = self.mesh.locate(t)?;
        self.eval_in(n, t)
    }

    /// `U(t)` strictly inside an interval; an error at mesh levels, where
    /// the DG solution is two-valued.
    pub fn eval_interior(&self, t: f64) -> Result<Vec<f64>> {
        if self.mesh.levels().contains(&t) {
            return Err(Error::Domain(format!(
                "U is undefined at the mesh level t = {t}; request a one-sided limit"
            )));
        }
        let n = self.mesh.locate(t)?;
        self.eval_in(n, t)
    }
}

/// Interval-by-interval solver.
#[derive(Debug)]
pub struct DgStepper {
    problem: ProblemSpec,
    mass: TriMatrix,
    stiffness: TriMatrix,
    solution: DgSolution,
}

impl DgStepper {
    /// Sets `U^0_- = P_h u_0`.
    pub fn init(problem: &ProblemSpec, mesh: &TimeMesh) -> Result<Self> {
        let grid = *problem.grid();
        let initial = l2_project(|x| (problem.initial)(x), &grid)?;
        Ok(Self {
            mass: assemble_mass(&grid),
            stiffness: assemble_stiffness(&grid),
            problem: problem.clone(),
            solution: DgSolution {
                mesh: mesh.clone(),
                grid,
                initial,
                intervals: Vec::with_capacity(mesh.intervals()),
            },
        })
    }

    pub fn solution(&self) -> &DgSolution {
        &self.solution
    }

    pub fn into_solution(self) -> DgSolution {
        self.solution
    }

    /// Solves interval `n`; intervals `1..n-1` must already be computed.
    pub fn step(&mut self, n: usize) -> Result<()> {
        let mesh = &self.solution.mesh;
        if n == 0 || n > mesh.intervals() {
            return Err(Error::IndexOutOfRange {
                index: n,
                max: mesh.intervals(),
            });
        }
        if self.solution.intervals.len() != n - 1 {
            return Err(Error::MissingHistory {
                requested: n,
                available: self.solution.intervals.len(),
            });
        }
        let weights = memory_weights(self.problem.order, mesh, n)?;
        let kappa = weights.self_block();
        let [h0, h1] = memory_load(&weights, &self.solution.intervals, &self.stiffness)?;
        let previous = self.solution.left_limit(n - 1)?;
        let mut rhs0: Vec<f64> = self
            .mass
            .apply(previous)
            .iter()
            .zip(&h0)
            .map(|(m, h)| m - h)
            .collect();
        let mut rhs1: Vec<f64> = h1.iter().map(|h| -h).collect();
        if let Some([f0, f1]) = self.problem.source_loads(mesh, n) {
            rhs0.iter_mut().zip(&f0).for_each(|(r, f)| *r += f);
            rhs1.iter_mut().zip(&f1).for_each(|(r, f)| *r += f);
        }
        let coeff = |mass: f64, a: usize, b: usize| BlockCoeff {
            mass,
            stiffness: kappa.get(a, b),
        };
        let system = Block2System {
            mass: &self.mass,
            stiffness: &self.stiffness,
            blocks: [
                [coeff(0.5, 0, 0), coeff(0.5, 1, 0)],
                [coeff(-0.5, 0, 1), coeff(0.5, 1, 1)],
            ],
            rhs: [rhs0, rhs1],
        };
        let traces = solve_block2(&system)?;
        self.solution.intervals.push(traces);
        Ok(())
    }
}

/// Runs `init` and then `step(n)` for `n = 1..=N`.
pub fn solve(problem: &ProblemSpec, mesh: &TimeMesh) -> Result<DgSolution> {
    let mut stepper = DgStepper::init(problem, mesh)?;
    for n in 1..=mesh.intervals() {
        stepper.step(n)?;
    }
    Ok(stepper.into_solution())
}

/// Largest residual of the global DG equations over all space-time test
/// functions `phi_i lambda_b` on `I_n`, relative to the largest term. The
/// memory term is measured by `|A| sum_j |kappa| |U|`, since the history
/// contributions cancel heavily when `alpha < 0`.
///
/// The form is rebuilt from its jump formulation with freshly evaluated
/// weights, independently of [`DgStepper`].
pub fn residual_gn(solution: &DgSolution, problem: &ProblemSpec) -> Result<f64> {
    let grid = solution.grid;
    let mass = assemble_mass(&grid);
    let stiffness = assemble_stiffness(&grid);
    let abs_stiffness = TriMatrix {
        diag: stiffness.diag.iter().map(|v| v.abs()).collect(),
        off: stiffness.off.iter().map(|v| v.abs()).collect(),
    };
    let mesh = &solution.mesh;
    let dof = grid.dof();
    let mut residual = 0.0_f64;
    let mut scale = 0.0_f64;
    let mut track = |v: f64| scale = scale.max(v.abs());
    for n in 1..=solution.computed() {
        let weights: MemoryWeights = memory_weights(problem.order, mesh, n)?;
        let [u0, u1] = &solution.intervals[n - 1];
        let jump: Vec<f64> = u0
            .iter()
            .zip(solution.left_limit(n - 1)?)
            .map(|(p, m)| p - m)
            .collect();
        let jump_term = mass.apply(&jump);
        let slope: Vec<f64> = u1.iter().zip(u0).map(|(b, a)| 0.5 * (b - a)).collect();
        let transport = mass.apply(&slope);
        let source = problem.source_loads(mesh, n);
        for b in 0..2 {
            let mut combined = vec![0.0; dof];
            let mut magnitude = vec![0.0; dof];
            for j in 1..=n {
                let block = weights.block(j);
                let pair = &solution.intervals[j - 1];
                for a in 0..2 {
                    let kappa = block.get(a, b);
                    for ((c, m), u) in combined.iter_mut().zip(&mut magnitude).zip(&pair[a]) {
                        *c += kappa * u;
                        *m += (kappa * u).abs();
                    }
                }
            }
            let memory = stiffness.apply(&combined);
            let memory_magnitude = abs_stiffness.apply(&magnitude);
            for i in 0..dof {
                let mut r = transport[i] + memory[i];
                track(transport[i]);
                track(memory_magnitude[i]);
                if b == 0 {
                    r += jump_term[i];
                    track(jump_term[i]);
                }
                if let Some(f) = &source {
                    r -= f[b][i];
                    track(f[b][i]);
                }
                residual = residual.max(r.abs());
            }
        }
    }
    if scale == 0.0 {
        return Ok(residual);
    }
    Ok(residual / scale)
}

/// Both sides of the energy bound `max_{t} ||U(t)||^2 <= 8 |<U^0_-, U^0_+>|`
/// for `f = 0`, the maximum taken over the fine grid with `m` points per
/// interval and both one-sided limits at the levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityCheck {
    pub max_energy: f64,
    pub bound: f64,
}

impl StabilityCheck {
    pub fn holds(&self) -> bool {
        self.max_energy <= self.bound * (1.0 + 1e-12) + 1e-300
    }
}

pub fn stability_check(solution: &DgSolution, m: usize) -> Result<StabilityCheck> {
    if m == 0 {
        return Err(Error::Domain("refinement factor m must be >= 1".into()));
    }
    let mass = assemble_mass(&solution.grid);
    let initial_pairing = mass.bilinear(&solution.initial, solution.right_limit(0)?);
    let mut max_energy = 0.0_f64;
    for n in 1..=solution.computed() {
        let [u0, u1] = &solution.intervals[n - 1];
        for l in 0..=m {
            let lam1 = l as f64 / m as f64;
            let v: Vec<f64> = u0
                .iter()
                .zip(u1)
                .map(|(a, b)| a * (1.0 - lam1) + b * lam1)
                .collect();
            max_energy = max_energy.max(mass.bilinear(&v, &v));
        }
    }
    Ok(StabilityCheck {
        max_energy,
        bound: 8.0 * initial_pairing.abs(),
    })
}
