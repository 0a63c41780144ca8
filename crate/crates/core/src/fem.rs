//! Continuous piecewise-linear finite elements on a uniform partition of
//! `(0, 1)` with homogeneous Dirichlet conditions.
//!
//! Only the `M - 1` interior nodal values are stored; boundary values are
//! identically zero and never represented.

use crate::banded::BandMatrix;
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;

/// Gauss points per element for loads and error norms.
pub const ELEMENT_GAUSS_POINTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpatialGrid {
    subintervals: usize,
}

impl SpatialGrid {
    pub fn new(subintervals: usize) -> Result<Self> {
        if subintervals < 2 {
            return Err(Error::Domain(format!(
                "spatial grid needs at least 2 subintervals, got {subintervals}"
            )));
        }
        Ok(Self { subintervals })
    }

    /// Number of subintervals `M`.
    pub fn subintervals(&self) -> usize {
        self.subintervals
    }

    pub fn h(&self) -> f64 {
        1.0 / self.subintervals as f64
    }

    /// Interior degrees of freedom, `M - 1`.
    pub fn dof(&self) -> usize {
        self.subintervals - 1
    }

    /// Coordinate of interior node `i`, `0 <= i < dof` (node `x_{i+1}`).
    pub fn node(&self, i: usize) -> f64 {
        (i + 1) as f64 / self.subintervals as f64
    }

    /// Nodal values of `f` at the interior nodes.
    pub fn interpolate<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        (0..self.dof()).map(|i| f(self.node(i))).collect()
    }

    /// Value of the finite element function with interior values `coeffs`
    /// on element `e` (`0 <= e < M`) at local coordinate `xi` in `[0, 1]`.
    #[inline]
    fn element_value(&self, coeffs: &[f64], e: usize, xi: f64) -> f64 {
        let left = if e == 0 { 0.0 } else { coeffs[e - 1] };
        let right = if e + 1 == self.subintervals { 0.0 } else { coeffs[e] };
        left * (1.0 - xi) + right * xi
    }

    /// Quadrature points `x` and weights over the whole domain, element by
    /// element, using the 4-point Gauss rule.
    pub fn quadrature_points(&self) -> Vec<(f64, f64)> {
        let rule = gauss_legendre(ELEMENT_GAUSS_POINTS);
        let h = self.h();
        let mut points = Vec::with_capacity(self.subintervals * ELEMENT_GAUSS_POINTS);
        for e in 0..self.subintervals {
            let a = e as f64 * h;
            points.extend(rule.mapped(a, a + h));
        }
        points
    }

    /// Values of the finite element function at [`Self::quadrature_points`].
    pub fn values_at_quadrature_points(&self, coeffs: &[f64]) -> Vec<f64> {
        let rule = gauss_legendre(ELEMENT_GAUSS_POINTS);
        let mut values = Vec::with_capacity(self.subintervals * ELEMENT_GAUSS_POINTS);
        for e in 0..self.subintervals {
            for &x in &rule.nodes {
                values.push(self.element_value(coeffs, e, 0.5 * (x + 1.0)));
            }
        }
        values
    }

    /// Load vector `(∫ f phi_i dx)_i` with the 4-point Gauss rule per element.
    pub fn load_vector<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        let rule = gauss_legendre(ELEMENT_GAUSS_POINTS);
        let h = self.h();
        let dof = self.dof();
        let mut load = vec![0.0; dof];
        for e in 0..self.subintervals {
            let a = e as f64 * h;
            for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                let xi = 0.5 * (x + 1.0);
                let fw = f(a + h * xi) * w * 0.5 * h;
                if e > 0 {
                    load[e - 1] += fw * (1.0 - xi);
                }
                if e < dof {
                    load[e] += fw * xi;
                }
            }
        }
        load
    }
}

/// Symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMatrix {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl TriMatrix {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; x.len()];
        self.apply_into(x, &mut y);
        y
    }

    pub fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let n = self.diag.len();
        assert_eq!(x.len(), n, "vector length does not match matrix");
        for i in 0..n {
            let mut s = self.diag[i] * x[i];
            if i > 0 {
                s += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                s += self.off[i] * x[i + 1];
            }
            y[i] = s;
        }
    }

    /// `x^T A y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        self.apply(y).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// Thomas algorithm; valid for the symmetric positive definite matrices
    /// assembled here.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.diag.len();
        if rhs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rhs.len(),
            });
        }
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut denom = self.diag[0];
        for i in 0..n {
            if i > 0 {
                denom = self.diag[i] - self.off[i - 1] * c[i - 1];
            }
            if denom == 0.0 || !denom.is_finite() {
                return Err(Error::Singular("tridiagonal pivot vanished".into()));
            }
            if i + 1 < n {
                c[i] = self.off[i] / denom;
            }
            let prev = if i > 0 { self.off[i - 1] * d[i - 1] } else { 0.0 };
            d[i] = (rhs[i] - prev) / denom;
        }
        for i in (0..n.saturating_sub(1)).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        Ok(d)
    }
}

/// P1 mass matrix: diagonal `2h/3`, off-diagonal `h/6`.
pub fn assemble_mass(grid: &SpatialGrid) -> TriMatrix {
    let h = grid.h();
    TriMatrix {
        diag: vec![2.0 * h / 3.0; grid.dof()],
        off: vec![h / 6.0; grid.dof() - 1],
    }
}

/// P1 stiffness matrix of `-d^2/dx^2`: diagonal `2/h`, off-diagonal `-1/h`.
pub fn assemble_stiffness(grid: &SpatialGrid) -> TriMatrix {
    let h = grid.h();
    TriMatrix {
        diag: vec![2.0 / h; grid.dof()],
        off: vec![-1.0 / h; grid.dof() - 1],
    }
}

/// L2 projection `P_h f`.
pub fn l2_project<F: Fn(f64) -> f64>(f: F, grid: &SpatialGrid) -> Result<Vec<f64>> {
    let load = grid.load_vector(f);
    if load.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("L2 projection load"));
    }
    assemble_mass(grid).solve(&load)
}

/// Ritz projection `R_h f` for `f` vanishing at both ends.
///
/// In one dimension `A(f, phi_i) = (2 f(x_i) - f(x_{i-1}) - f(x_{i+1})) / h`
/// exactly, so only point values of `f` are needed.
pub fn ritz_project<F: Fn(f64) -> f64>(f: F, grid: &SpatialGrid) -> Result<Vec<f64>> {
    let h = grid.h();
    let m = grid.subintervals();
    let values: Vec<f64> = (0..=m).map(|i| f(i as f64 * h)).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("Ritz projection load"));
    }
    let load: Vec<f64> = (1..m)
        .map(|i| (2.0 * values[i] - values[i - 1] - values[i + 1]) / h)
        .collect();
    assemble_stiffness(grid).solve(&load)
}

/// `||U_h - reference||_{L2(0,1)}` with the 4-point Gauss rule per element.
pub fn l2_norm_against<F: Fn(f64) -> f64>(coeffs: &[f64], reference: F, grid: &SpatialGrid) -> f64 {
    let values = grid.values_at_quadrature_points(coeffs);
    grid.quadrature_points()
        .iter()
        .zip(&values)
        .map(|(&(x, w), &u)| {
            let e = u - reference(x);
            w * e * e
        })
        .sum::<f64>()
        .sqrt()
}

/// Coefficients `c_{ba} Mass + d_{ba} Stiffness` of the block multiplying
/// unknown `a` in equation `b`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlockCoeff {
    pub mass: f64,
    pub stiffness: f64,
}

/// A 2x2 block system whose blocks are combinations of the mass and
/// stiffness matrices.
#[derive(Debug, Clone)]
pub struct Block2System<'a> {
    pub mass: &'a TriMatrix,
    pub stiffness: &'a TriMatrix,
    /// `blocks[b][a]`: equation `b`, unknown `a`.
    pub blocks: [[BlockCoeff; 2]; 2],
    pub rhs: [Vec<f64>; 2],
}

impl Block2System<'_> {
    /// Interleaved band matrix, unknown `(i, a)` at index `2i + a`.
    fn band(&self) -> BandMatrix {
        let n = self.mass.dim();
        let mut band = BandMatrix::zeros(2 * n, 3, 3);
        for b in 0..2 {
            for a in 0..2 {
                let c = self.blocks[b][a];
                for i in 0..n {
                    band.add(2 * i + b, 2 * i + a, c.mass * self.mass.diag[i] + c.stiffness * self.stiffness.diag[i]);
                    if i + 1 < n {
                        let v = c.mass * self.mass.off[i] + c.stiffness * self.stiffness.off[i];
                        band.add(2 * i + b, 2 * (i + 1) + a, v);
                        band.add(2 * (i + 1) + b, 2 * i + a, v);
                    }
                }
            }
        }
        band
    }

    /// Residuals `sum_a B_{ba} x_a - rhs_b`.
    pub fn residual(&self, x: &[Vec<f64>; 2]) -> [Vec<f64>; 2] {
        let mut out = [self.rhs[0].iter().map(|v| -v).collect::<Vec<_>>(), self.rhs[1].iter().map(|v| -v).collect()];
        for (b, row) in out.iter_mut().enumerate() {
            for (a, xa) in x.iter().enumerate() {
                let c = self.blocks[b][a];
                let mx = self.mass.apply(xa);
                let kx = self.stiffness.apply(xa);
                for i in 0..row.len() {
                    row[i] += c.mass * mx[i] + c.stiffness * kx[i];
                }
            }
        }
        out
    }
}

/// Solves a [`Block2System`] by banded LU on the interleaved unknowns.
pub fn solve_block2(system: &Block2System<'_>) -> Result<[Vec<f64>; 2]> {
    let n = system.mass.dim();
    if system.stiffness.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: system.stiffness.dim(),
        });
    }
    for r in &system.rhs {
        if r.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: r.len(),
            });
        }
    }
    let mut rhs = vec![0.0; 2 * n];
    for i in 0..n {
        rhs[2 * i] = system.rhs[0][i];
        rhs[2 * i + 1] = system.rhs[1][i];
    }
    let z = system.band().factor()?.solve(&rhs)?;
    let mut x = [vec![0.0; n], vec![0.0; n]];
    for i in 0..n {
        x[0][i] = z[2 * i];
        x[1][i] = z[2 * i + 1];
    }
    Ok(x)
}
