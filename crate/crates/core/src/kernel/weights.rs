//! Exact memory weights of the piecewise-linear DG scheme.
//!
//! On each interval `I_j = (t_{j-1}, t_j)` a trial function is written in the
//! local shapes `lambda_0 = (t_j - t)/k_j` and `lambda_1 = (t - t_{j-1})/k_j`,
//! with coefficients `(U^{j-1}_+, U^j_-)`. The weight
//!
//! ```text
//! kappa^{n,j}_{ab} = ∫_{I_n} chi_b(t) B_alpha[lambda_a 1_{I_j}](t) dt
//! ```
//!
//! pairs trial shape `a` on `I_j` with test shape `b` on `I_n`, so that
//! `∫_{I_n} A(B_alpha U, chi_b) dt = sum_{j,a} kappa^{n,j}_{ab} A(U_a^{(j)}, .)`.
//! Since `B_alpha` is linear, the initial trace `U^0_+` needs no separate
//! term: it is the `a = 0` coefficient on `I_1`.
//!
//! For touching intervals (`j >= n - 1`) the weights come from closed forms
//! built on `∫_0^s omega_mu = omega_{mu+1}`. For separated intervals the
//! kernel is analytic on `I_j x I_n`; there the closed forms cancel
//! catastrophically on strongly graded meshes, so a tensor Gauss rule on
//! panels sized to the distance from the diagonal is used instead.

use crate::error::{Error, Result};
use crate::fem::TriMatrix;
use crate::kernel::{gamma, FracOrder};
use crate::mesh::TimeMesh;
use crate::quadrature::gauss_legendre;

/// `kappa[a][b]` for one `(n, j)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WeightBlock(pub [[f64; 2]; 2]);

impl WeightBlock {
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.0[a][b]
    }

    fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }
}

/// All weight blocks `kappa^{n,j}`, `1 <= j <= n`, for one interval `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MemoryWeights {
    n: usize,
    blocks: Vec<WeightBlock>,
}

impl MemoryWeights {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `kappa^{n,j}`, `1 <= j <= n`.
    pub fn block(&self, j: usize) -> &WeightBlock {
        &self.blocks[j - 1]
    }

    /// The self-interaction block `kappa^{n,n}`.
    pub fn self_block(&self) -> &WeightBlock {
        &self.blocks[self.n - 1]
    }

    /// Blocks for the past intervals `1..n-1`.
    pub fn history(&self) -> &[WeightBlock] {
        &self.blocks[..self.n - 1]
    }
}

/// Weights for interval `n`: closed forms for `j in {n-1, n}`, panel
/// quadrature of the analytic kernel for `j <= n-2`.
pub fn memory_weights(order: FracOrder, mesh: &TimeMesh, n: usize) -> Result<MemoryWeights> {
    check_index(mesh, n)?;
    let blocks = (1..=n)
        .map(|j| {
            if j + 1 >= n {
                closed_form_block(order, mesh, n, j)
            } else {
                separated_block(order, mesh, n, j)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MemoryWeights { n, blocks })
}

fn check_index(mesh: &TimeMesh, n: usize) -> Result<()> {
    let max = mesh.intervals();
    if n == 0 || n > max {
        return Err(Error::IndexOutOfRange { index: n, max });
    }
    Ok(())
}

/// `Phi_nu(x) = omega_nu(x)` for `x > 0`, zero otherwise; `nu > 1` throughout.
struct ShiftedKernels {
    inv_gamma: [f64; 5],
    base: f64,
}

impl ShiftedKernels {
    fn new(base: f64) -> Self {
        let mut inv_gamma = [0.0; 5];
        for (i, slot) in inv_gamma.iter_mut().enumerate() {
            *slot = 1.0 / gamma(base + i as f64);
        }
        Self { inv_gamma, base }
    }

    /// `Phi_{base + shift}(x)`.
    fn eval(&self, shift: usize, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            x.powf(self.base + shift as f64 - 1.0) * self.inv_gamma[shift]
        }
    }
}

/// A linear function on `[x0, x1]` described by its end values and slope.
#[derive(Clone, Copy)]
struct Linear {
    start: f64,
    end: f64,
    slope: f64,
}

fn shape(a: usize, length: f64) -> Linear {
    if a == 0 {
        Linear {
            start: 1.0,
            end: 0.0,
            slope: -1.0 / length,
        }
    } else {
        Linear {
            start: 0.0,
            end: 1.0,
            slope: 1.0 / length,
        }
    }
}

/// Closed-form weight block for any `1 <= j <= n`.
///
/// With `W(t) = ∫_{I_j, s<t} omega_mu(t-s) p(s) ds` expanded as
/// `p(s0) Phi_{mu+1}(t-s0) - p(s1) Phi_{mu+1}(t-s1) + p' [Phi_{mu+2}(t-s0) - Phi_{mu+2}(t-s1)]`,
/// the weight is `∫ q W` for `alpha > 0` (`mu = alpha`) and
/// `[q W] - q' ∫ W` for `alpha < 0` (`mu = 1 + alpha`, `B_alpha = d/dt`).
pub fn closed_form_block(order: FracOrder, mesh: &TimeMesh, n: usize, j: usize) -> Result<WeightBlock> {
    check_index(mesh, n)?;
    if j == 0 || j > n {
        return Err(Error::IndexOutOfRange { index: j, max: n });
    }
    let alpha = order.alpha();
    if alpha == 0.0 {
        return Ok(identity_block(mesh, n, j));
    }
    // Local coordinates with origin t_{n-1}.
    let origin = mesh.level(n - 1);
    let kn = mesh.step(n);
    let kj = mesh.step(j);
    let (t0, t1) = (0.0, kn);
    let (s0, s1) = if j == n {
        (0.0, kn)
    } else {
        (mesh.level(j - 1) - origin, mesh.level(j) - origin)
    };

    let derivative = alpha < 0.0;
    let mu = if derivative { 1.0 + alpha } else { alpha };
    let phi = ShiftedKernels::new(mu);

    let mut block = WeightBlock::default();
    for a in 0..2 {
        let p = shape(a, kj);
        // W(t) = sum c * Phi_{mu + 1 + shift}(t - sigma)
        let terms = [
            (p.start, s0, 1usize),
            (-p.end, s1, 1),
            (p.slope, s0, 2),
            (-p.slope, s1, 2),
        ];
        let w_at = |t: f64| -> f64 { terms.iter().map(|&(c, sigma, sh)| c * phi.eval(sh, t - sigma)).sum() };
        for b in 0..2 {
            let q = shape(b, kn);
            let value = if derivative {
                let integral_w: f64 = terms
                    .iter()
                    .map(|&(c, sigma, sh)| c * (phi.eval(sh + 1, t1 - sigma) - phi.eval(sh + 1, t0 - sigma)))
                    .sum();
                q.end * w_at(t1) - q.start * w_at(t0) - q.slope * integral_w
            } else {
                terms
                    .iter()
                    .map(|&(c, sigma, sh)| {
                        c * (q.end * phi.eval(sh + 1, t1 - sigma) - q.start * phi.eval(sh + 1, t0 - sigma)
                            - q.slope * (phi.eval(sh + 2, t1 - sigma) - phi.eval(sh + 2, t0 - sigma)))
                    })
                    .sum()
            };
            block.0[a][b] = value;
        }
    }
    if !block.is_finite() {
        return Err(Error::NonFinite("closed-form memory weight"));
    }
    Ok(block)
}

/// `B_0` is the identity: the mass pairing on the diagonal, nothing else.
fn identity_block(mesh: &TimeMesh, n: usize, j: usize) -> WeightBlock {
    if j != n {
        return WeightBlock::default();
    }
    let k = mesh.step(n);
    WeightBlock([[k / 3.0, k / 6.0], [k / 6.0, k / 3.0]])
}

const SEPARATED_ORDER: usize = 12;

/// Weight block for separated intervals `j <= n - 2`, where
/// `B_alpha[lambda_a 1_{I_j}](t) = ∫_{I_j} omega_alpha(t - s) lambda_a(s) ds`
/// for either sign of `alpha`.
///
/// Each interval is split into panels no longer than their distance to the
/// diagonal `s = t`, which keeps the Gauss error near `5.8^{-2q}`.
pub fn separated_block(order: FracOrder, mesh: &TimeMesh, n: usize, j: usize) -> Result<WeightBlock> {
    check_index(mesh, n)?;
    if j == 0 || j + 2 > n {
        return Err(Error::Domain(format!(
            "intervals {j} and {n} are not separated"
        )));
    }
    let alpha = order.alpha();
    if alpha == 0.0 {
        return Ok(WeightBlock::default());
    }
    let inv_gamma = 1.0 / gamma(alpha);
    let (sa, sb) = mesh.interval(j);
    let (ta, tb) = mesh.interval(n);
    let (kj, kn) = (sb - sa, tb - ta);

    // Panels in t grow away from t_{n-1}; panels in s grow away from t_j.
    let mut t_panels = Vec::new();
    let mut x = ta;
    while x < tb {
        let next = (x + (x - sb)).min(tb);
        t_panels.push((x, next));
        x = next;
    }
    let mut s_panels = Vec::new();
    let mut y = sb;
    while y > sa {
        let next = (y - (ta - y)).max(sa);
        s_panels.push((next, y));
        y = next;
    }

    let rule = gauss_legendre(SEPARATED_ORDER);
    let mut block = WeightBlock::default();
    for &(t_lo, t_hi) in &t_panels {
        for (t, wt) in rule.mapped(t_lo, t_hi) {
            let q1 = (t - ta) / kn;
            let q0 = 1.0 - q1;
            for &(s_lo, s_hi) in &s_panels {
                for (s, ws) in rule.mapped(s_lo, s_hi) {
                    let p1 = (s - sa) / kj;
                    let p0 = 1.0 - p1;
                    let kernel = wt * ws * (t - s).powf(alpha - 1.0) * inv_gamma;
                    block.0[0][0] += kernel * p0 * q0;
                    block.0[0][1] += kernel * p0 * q1;
                    block.0[1][0] += kernel * p1 * q0;
                    block.0[1][1] += kernel * p1 * q1;
                }
            }
        }
    }
    if !block.is_finite() {
        return Err(Error::NonFinite("separated memory weight"));
    }
    Ok(block)
}

/// History load `sum_{j<n} sum_a kappa^{n,j}_{ab} K U_a^{(j)}` for `b = 0, 1`.
///
/// `history[j-1]` holds `(U^{j-1}_+, U^j_-)` for each past interval.
pub fn memory_load(
    weights: &MemoryWeights,
    history: &[[Vec<f64>; 2]],
    stiffness: &TriMatrix,
) -> Result<[Vec<f64>; 2]> {
    let dof = stiffness.dim();
    let past = weights.n() - 1;
    if history.len() < past {
        return Err(Error::MissingHistory {
            requested: weights.n(),
            available: history.len(),
        });
    }
    let mut acc = [vec![0.0; dof], vec![0.0; dof]];
    for (block, pair) in weights.history().iter().zip(&history[..past]) {
        for (a, coeffs) in pair.iter().enumerate() {
            if coeffs.len() != dof {
                return Err(Error::DimensionMismatch {
                    expected: dof,
                    found: coeffs.len(),
                });
            }
            for (b, target) in acc.iter_mut().enumerate() {
                let kappa = block.get(a, b);
                for (t, &u) in target.iter_mut().zip(coeffs) {
                    *t += kappa * u;
                }
            }
        }
    }
    Ok([stiffness.apply(&acc[0]), stiffness.apply(&acc[1])])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{assemble_stiffness, SpatialGrid};

    fn order(alpha: f64) -> FracOrder {
        FracOrder::new(alpha).unwrap()
    }

    #[test]
    fn constant_pairing_on_single_interval() {
        let mesh = TimeMesh::from_levels(vec![0.0, 1.0]).unwrap();
        let w = memory_weights(order(0.5), &mesh, 1).unwrap();
        let total: f64 = w.self_block().0.iter().flatten().sum();
        let expected = 4.0 / (3.0 * std::f64::consts::PI.sqrt());
        assert!((total - expected).abs() < 1e-14, "{total} vs {expected}");
    }

    // High-precision reference values (60-digit arithmetic, two independent
    // integration routes).
    #[test]
    fn negative_order_two_interval_values() {
        let mesh = TimeMesh::from_levels(vec![0.0, 0.25, 1.0]).unwrap();
        let w = memory_weights(order(-0.3), &mesh, 2).unwrap();
        let expected_past = [
            [-0.050_693_424_200_225_81, -0.022_097_489_829_522_646],
            [-0.114_233_114_209_388_56, -0.029_269_755_746_346_183],
        ];
        let expected_self = [
            [0.333_263_594_745_772_07, 0.037_247_107_648_056_883],
            [0.196_037_408_673_983_57, 0.333_263_594_745_772_07],
        ];
        for a in 0..2 {
            for b in 0..2 {
                assert!((w.block(1).get(a, b) - expected_past[a][b]).abs() < 1e-13);
                assert!((w.block(2).get(a, b) - expected_self[a][b]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn positive_order_two_interval_values() {
        let mesh = TimeMesh::from_levels(vec![0.0, 0.25, 1.0]).unwrap();
        let w = memory_weights(order(0.5), &mesh, 2).unwrap();
        let expected_past = [
            [0.044_832_015_277_758_876, 0.033_720_373_812_764_372],
            [0.054_359_318_036_012_55, 0.036_706_961_776_259_95],
        ];
        let expected_self = [
            [0.139_600_717_686_548_55, 0.153_560_789_455_203_4],
            [0.055_840_287_074_619_42, 0.139_600_717_686_548_55],
        ];
        for a in 0..2 {
            for b in 0..2 {
                assert!((w.block(1).get(a, b) - expected_past[a][b]).abs() < 1e-13);
                assert!((w.block(2).get(a, b) - expected_self[a][b]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn separated_quadrature_agrees_with_closed_form_on_mild_meshes() {
        let mesh = TimeMesh::graded(8, 1.5, 1.0).unwrap();
        for &alpha in &[-0.7, -0.3, 0.3, 0.8] {
            for n in 3..=8 {
                for j in 1..=n - 2 {
                    let closed = closed_form_block(order(alpha), &mesh, n, j).unwrap();
                    let quad = separated_block(order(alpha), &mesh, n, j).unwrap();
                    for a in 0..2 {
                        for b in 0..2 {
                            let diff = (closed.get(a, b) - quad.get(a, b)).abs();
                            assert!(diff < 1e-12, "alpha={alpha} n={n} j={j}: {diff:e}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn heat_limit() {
        let mesh = TimeMesh::graded(6, 2.0, 1.0).unwrap();
        for &alpha in &[1e-6, -1e-6] {
            for n in 1..=6 {
                let w = memory_weights(order(alpha), &mesh, n).unwrap();
                let k = mesh.step(n);
                let mass = [[k / 3.0, k / 6.0], [k / 6.0, k / 3.0]];
                for a in 0..2 {
                    for b in 0..2 {
                        let got = w.self_block().get(a, b);
                        assert!(
                            (got - mass[a][b]).abs() < 1e-4 * mass[a][b],
                            "alpha={alpha} n={n}: {got} vs {}",
                            mass[a][b]
                        );
                    }
                }
                for j in 1..n {
                    assert!(w.block(j).0.iter().flatten().all(|v| v.abs() < 1e-4 * k));
                }
            }
        }
        let exact = memory_weights(order(0.0), &mesh, 3).unwrap();
        assert_eq!(exact.block(1), &WeightBlock::default());
    }

    #[test]
    fn index_errors() {
        let mesh = TimeMesh::graded(4, 2.0, 1.0).unwrap();
        assert!(memory_weights(order(0.3), &mesh, 0).is_err());
        assert!(memory_weights(order(0.3), &mesh, 5).is_err());
        assert!(closed_form_block(order(0.3), &mesh, 2, 3).is_err());
        assert!(separated_block(order(0.3), &mesh, 3, 2).is_err());
    }

    #[test]
    fn memory_load_examples() {
        let mesh = TimeMesh::graded(3, 1.0, 1.0).unwrap();
        let grid = SpatialGrid::new(4).unwrap();
        let stiff = assemble_stiffness(&grid);

        let first = memory_weights(order(0.4), &mesh, 1).unwrap();
        let load = memory_load(&first, &[], &stiff).unwrap();
        assert!(load.iter().flatten().all(|&v| v == 0.0));

        let w = memory_weights(order(0.4), &mesh, 2).unwrap();
        let zeros = [vec![0.0; 3], vec![0.0; 3]];
        let load = memory_load(&w, std::slice::from_ref(&zeros), &stiff).unwrap();
        assert!(load.iter().flatten().all(|&v| v == 0.0));

        // Hand-summed oracle at dof = 3.
        let u0 = vec![1.0, -2.0, 0.5];
        let u1 = vec![0.25, 3.0, -1.0];
        let history = [[u0.clone(), u1.clone()]];
        let load = memory_load(&w, &history, &stiff).unwrap();
        let kb = w.block(1);
        let k_dense = [[8.0, -4.0, 0.0], [-4.0, 8.0, -4.0], [0.0, -4.0, 8.0]];
        for b in 0..2 {
            for i in 0..3 {
                let mut expected = 0.0;
                for l in 0..3 {
                    expected += k_dense[i][l] * (kb.get(0, b) * u0[l] + kb.get(1, b) * u1[l]);
                }
                assert!((load[b][i] - expected).abs() < 1e-14);
            }
        }

        let bad = [[vec![0.0; 2], vec![0.0; 2]]];
        assert!(memory_load(&w, &bad, &stiff).is_err());
        let w3 = memory_weights(order(0.4), &mesh, 3).unwrap();
        assert!(matches!(
            memory_load(&w3, &history, &stiff),
            Err(Error::MissingHistory { .. })
        ));
    }
}
