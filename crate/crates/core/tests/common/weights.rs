//! Exact singular-quadrature oracle for the memory weights.
//!
//! With `u = t - s` the double integral over `I_n x I_j` becomes
//! `∫ omega_mu(u) g(u) du` where `g` is a piecewise cubic. The piece at
//! `u = 0` is integrated exactly by Gauss–Jacobi quadrature for the weight
//! `u^{mu-1}`; the others are smooth and get Gauss–Legendre panels graded
//! geometrically away from the origin.

use fracdg::kernel::{gamma, memory_weights, FracOrder};
use fracdg::TimeMesh;
use nalgebra::{DMatrix, SymmetricEigen};

/// Nodes and weights on `[-1, 1]` for the weight `(1 + x)^beta` (Golub–Welsch).
pub fn gauss_jacobi(n: usize, beta: f64) -> (Vec<f64>, Vec<f64>) {
    let (a, b) = (0.0, beta);
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        jac[(k, k)] = if k == 0 {
            (b - a) / (a + b + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        };
        if k + 1 < n {
            let k1 = kf + 1.0;
            let s1 = 2.0 * k1 + a + b;
            let off = (4.0 * k1 * (k1 + a) * (k1 + b) * (k1 + a + b)
                / (s1 * s1 * (s1 + 1.0) * (s1 - 1.0)))
                .sqrt();
            jac[(k, k + 1)] = off;
            jac[(k + 1, k)] = off;
        }
    }
    let mu0 = 2f64.powf(a + b + 1.0) * gamma(a + 1.0) * gamma(b + 1.0) / gamma(a + b + 2.0);
    let eig = SymmetricEigen::new(jac);
    let nodes = eig.eigenvalues.iter().copied().collect();
    let weights = (0..n).map(|i| mu0 * eig.eigenvectors[(0, i)].powi(2)).collect();
    (nodes, weights)
}

/// `∫_0^U omega_mu(u) p(u) du` for a polynomial `p` of degree <= 9.
fn jacobi_integral(mu: f64, upper: f64, p: &dyn Fn(f64) -> f64) -> f64 {
    if upper <= 0.0 {
        return 0.0;
    }
    let (nodes, weights) = gauss_jacobi(6, mu - 1.0);
    let half = 0.5 * upper;
    let sum: f64 = nodes
        .iter()
        .zip(&weights)
        .map(|(x, w)| w * p(half * (1.0 + x)))
        .sum();
    half.powf(mu) * sum * recip_gamma(mu)
}

/// `1 / Gamma(mu)` for any non-integer `mu > -1`.
fn recip_gamma(mu: f64) -> f64 {
    mu / gamma(mu + 1.0)
}

/// `∫_{u0}^{u1} omega_mu(u) g(u) du` for `0 < u0 < u1`, with panels `[a, b]`
/// satisfying `b <= 2a` so each is far from the singularity.
fn smooth_integral(mu: f64, u0: f64, u1: f64, g: &dyn Fn(f64) -> f64) -> f64 {
    let (nodes, weights) = gauss_jacobi(20, 0.0);
    let mut total = 0.0;
    let mut a = u0;
    while a < u1 {
        let b = (2.0 * a).min(u1);
        let (half, mid) = (0.5 * (b - a), 0.5 * (b + a));
        for (x, w) in nodes.iter().zip(&weights) {
            let u = mid + half * x;
            total += w * half * u.powf(mu - 1.0) * g(u);
        }
        a = b;
    }
    total * recip_gamma(mu)
}

const GL3: ([f64; 3], [f64; 3]) = (
    [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4],
    [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0],
);

fn shape(a: usize, lo: f64, hi: f64, s: f64) -> f64 {
    let l1 = (s - lo) / (hi - lo);
    if a == 0 {
        1.0 - l1
    } else {
        l1
    }
}

/// Cubic interpolant through four values at equispaced nodes of `[u0, u1]`.
fn cubic_through(u0: f64, u1: f64, f: &dyn Fn(f64) -> f64) -> impl Fn(f64) -> f64 {
    let xs: Vec<f64> = (0..4).map(|i| u0 + (u1 - u0) * i as f64 / 3.0).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    move |u| {
        let mut total = 0.0;
        for i in 0..4 {
            let mut l = 1.0;
            for k in 0..4 {
                if k != i {
                    l *= (u - xs[k]) / (xs[i] - xs[k]);
                }
            }
            total += ys[i] * l;
        }
        total
    }
}

/// `∫_{I_n} test(t) ∫_{I_j, s < t} omega_mu(t - s) lambda_a(s) ds dt` with a
/// test function of degree <= 1.
fn double_integral(
    mu: f64,
    (ta, tb): (f64, f64),
    (sa, sb): (f64, f64),
    a: usize,
    test: &dyn Fn(f64) -> f64,
) -> f64 {
    let g = |u: f64| {
        let lo = ta.max(sa + u);
        let hi = tb.min(sb + u);
        if hi <= lo {
            return 0.0;
        }
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        GL3.0
            .iter()
            .zip(&GL3.1)
            .map(|(x, w)| {
                let t = mid + half * x;
                w * half * test(t) * shape(a, sa, sb, t - u)
            })
            .sum::<f64>()
    };
    let mut breaks: Vec<f64> = [ta - sb, ta - sa, tb - sb, tb - sa]
        .iter()
        .map(|&u| u.max(0.0))
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let (u0, u1) = (w[0], w[1]);
        if u1 - u0 <= 0.0 {
            continue;
        }
        total += if u0 == 0.0 {
            jacobi_integral(mu, u1, &cubic_through(u0, u1, &g))
        } else {
            smooth_integral(mu, u0, u1, &g)
        };
    }
    total
}

/// `∫_{I_j, s < t} omega_mu(t - s) lambda_a(s) ds`.
fn single_integral(mu: f64, t: f64, (sa, sb): (f64, f64), a: usize) -> f64 {
    let (u0, u1) = ((t - sb).max(0.0), t - sa);
    if u1 <= 0.0 {
        return 0.0;
    }
    let p = |u: f64| shape(a, sa, sb, t - u);
    if u0 == 0.0 {
        jacobi_integral(mu, u1, &p)
    } else {
        smooth_integral(mu, u0, u1, &p)
    }
}

pub fn oracle(alpha: f64, mesh: &TimeMesh, n: usize, j: usize, a: usize, b: usize) -> f64 {
    let inn = mesh.interval(n);
    let ij = mesh.interval(j);
    let test = |t: f64| shape(b, inn.0, inn.1, t);
    if alpha > 0.0 || j + 1 < n {
        // separated intervals keep t - s away from 0 for either sign
        return double_integral(alpha, inn, ij, a, &test);
    }
    // d/dt of the order 1 + alpha integral, integrated by parts in t
    let mu = 1.0 + alpha;
    let k = inn.1 - inn.0;
    let boundary = test(inn.1) * single_integral(mu, inn.1, ij, a)
        - test(inn.0) * single_integral(mu, inn.0, ij, a);
    let slope = if b == 0 { -1.0 / k } else { 1.0 / k };
    boundary - slope * double_integral(mu, inn, ij, a, &|_| 1.0)
}

/// Largest relative deviation of the library weights from the oracle over
/// all pairs `j <= n` of the mesh.
pub fn max_relative_error(alpha: f64, mesh: &TimeMesh) -> f64 {
    let order = FracOrder::new(alpha).unwrap();
    let mut worst = 0.0_f64;
    for n in 1..=mesh.intervals() {
        let weights = memory_weights(order, mesh, n).unwrap();
        for j in 1..=n {
            for a in 0..2 {
                for b in 0..2 {
                    let expected = oracle(alpha, mesh, n, j, a, b);
                    let got = weights.block(j).get(a, b);
                    worst = worst.max((got - expected).abs() / expected.abs());
                }
            }
        }
    }
    worst
}
