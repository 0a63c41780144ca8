mod common;

use std::sync::Arc;

use approx::assert_relative_eq;
use fracdg::fem::{
    assemble_mass, assemble_stiffness, l2_project, solve_block2, Block2System, BlockCoeff,
};
use fracdg::mesh::standard_lambda;
use fracdg::postprocess::{pi_minus, pi_plus};
use fracdg::{
    mittag_leffler, residual_gn, solve, stability_check, FracOrder, PostprocessedSolution,
    ProblemSpec, SpatialGrid, TimeMesh,
};
use common::heat::heat_dg;
use nalgebra::DVector;
use proptest::prelude::*;

fn random_mesh(raw: &[f64], horizon: f64) -> TimeMesh {
    let total: f64 = raw.iter().sum();
    let mut levels = vec![0.0];
    let mut acc = 0.0;
    for r in raw {
        acc += r / total * horizon;
        levels.push(acc);
    }
    *levels.last_mut().unwrap() = horizon;
    TimeMesh::from_levels(levels).unwrap()
}

fn samples(a: f64, b: f64, count: usize) -> impl Iterator<Item = f64> {
    (0..=count).map(move |i| a + (b - a) * i as f64 / count as f64)
}

fn alpha_strategy() -> impl Strategy<Value = f64> {
    prop_oneof![-0.95f64..-0.05, 0.05f64..0.95]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Every solve satisfies the global DG equations and the energy bound.
    #[test]
    fn solves_satisfy_residual_and_stability(
        alpha in alpha_strategy(),
        gamma in 1.0f64..4.0,
        intervals in 2usize..14,
        m in 3usize..40,
        smooth in any::<bool>(),
    ) {
        let order = FracOrder::new(alpha).unwrap();
        let grid = SpatialGrid::new(m).unwrap();
        let problem = if smooth {
            ProblemSpec::model(order, grid)
        } else {
            let kink = Arc::new(|x: f64| x.min(1.0 - x));
            ProblemSpec::new(order, grid, kink, None).unwrap()
        };
        let mesh = TimeMesh::graded(intervals, gamma, 1.0).unwrap();
        let solution = solve(&problem, &mesh).unwrap();
        let residual = residual_gn(&solution, &problem).unwrap();
        prop_assert!(residual <= 1e-9, "residual {residual:e}");
        let check = stability_check(&solution, 4).unwrap();
        prop_assert!(check.holds(), "{} > {}", check.max_energy, check.bound);
    }

    #[test]
    fn graded_meshes_meet_their_assumptions(intervals in 2usize..300, gamma in 1.0f64..4.0, horizon in 0.1f64..10.0) {
        let mesh = TimeMesh::graded(intervals, gamma, horizon).unwrap();
        let steps = mesh.steps();
        assert_relative_eq!(steps.iter().sum::<f64>(), horizon, max_relative = 1e-13);
        prop_assert!(steps.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12)));
        // k lies between T/N and gamma T/N, so k_1 / k^gamma lies in [gamma^-gamma, 1]
        prop_assert!(mesh.check_grading(gamma).passes(gamma.powf(-gamma), gamma));
    }

    /// The postprocessor obeys `|Lv| <= (2 + 5/4 Lambda) max |v^j|` over the
    /// stencil, with `Lambda` the quasi-uniformity constant of the mesh.
    #[test]
    fn postprocessor_is_stable(
        values in prop::collection::vec(-1.0f64..1.0, 13),
        gamma in 1.0f64..4.0,
    ) {
        let mesh = TimeMesh::graded(12, gamma, 1.0).unwrap();
        let nodal = values.iter().map(|&v| vec![v]).collect();
        let pp = PostprocessedSolution::from_nodal(mesh.clone(), nodal).unwrap();
        let bound = 2.0 + 1.25 * standard_lambda(gamma);
        for n in 1..=12 {
            let (a, b) = mesh.interval(n);
            let local = values[n.saturating_sub(2)..=n].iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for t in samples(a, b, 50) {
                prop_assert!(pp.eval_in(n, t)[0].abs() <= bound * local * (1.0 + 1e-12));
            }
        }
    }

    /// Linears everywhere and quadratics from `I_3` on are reproduced.
    #[test]
    fn postprocessor_reproduces_polynomials(
        raw in prop::collection::vec(0.1f64..1.0, 3..12),
        c in prop::array::uniform3(-2.0f64..2.0),
    ) {
        let mesh = random_mesh(&raw, 1.0);
        let linear = |t: f64| c[0] + c[1] * t;
        let quadratic = |t: f64| c[0] + c[1] * t + c[2] * t * t;
        let nodal = |f: &dyn Fn(f64) -> f64| mesh.levels().iter().map(|&t| vec![f(t)]).collect();
        let lin = PostprocessedSolution::from_nodal(mesh.clone(), nodal(&linear)).unwrap();
        let quad = PostprocessedSolution::from_nodal(mesh.clone(), nodal(&quadratic)).unwrap();
        for n in 1..=mesh.intervals() {
            let (a, b) = mesh.interval(n);
            for t in samples(a, b, 7) {
                prop_assert!((lin.eval_in(n, t)[0] - linear(t)).abs() <= 1e-13);
                if n >= 3 {
                    prop_assert!((quad.eval_in(n, t)[0] - quadratic(t)).abs() <= 1e-13);
                }
            }
        }
    }

    /// `Pi^-` matches left limits and `Pi^+` right limits; both keep means.
    #[test]
    fn one_sided_projections_meet_their_conditions(
        raw in prop::collection::vec(0.1f64..1.0, 2..10),
        freq in 0.5f64..4.0,
    ) {
        let mesh = random_mesh(&raw, 2.0);
        let v = |t: f64| (freq * t).sin();
        let mean = |a: f64, b: f64| ((freq * a).cos() - (freq * b).cos()) / (freq * (b - a));
        let minus = pi_minus(v, &mesh);
        let plus = pi_plus(v, &mesh);
        for n in 1..=mesh.intervals() {
            let (a, b) = mesh.interval(n);
            let [m0, m1] = minus.ends(n);
            let [p0, p1] = plus.ends(n);
            prop_assert!((m1 - v(b)).abs() <= 1e-11);
            prop_assert!((p0 - v(a)).abs() <= 1e-11);
            prop_assert!((0.5 * (m0 + m1) - mean(a, b)).abs() <= 1e-11);
            prop_assert!((0.5 * (p0 + p1) - mean(a, b)).abs() <= 1e-11);
        }
    }

    #[test]
    fn exponential_is_first_order_mittag_leffler(z in -50.0f64..=0.0) {
        let e = mittag_leffler(1.0, z).unwrap();
        prop_assert!((e - z.exp()).abs() <= 1e-12 * z.exp().max(1e-300) + 1e-300, "{e:e} vs {:e}", z.exp());
    }

    #[test]
    fn l2_projection_is_idempotent(m in 2usize..60, seed in prop::collection::vec(-1.0f64..1.0, 60)) {
        let grid = SpatialGrid::new(m).unwrap();
        let coeffs = &seed[..grid.dof()];
        let h = grid.h();
        let fe = |x: f64| {
            let i = ((x / h).floor() as usize).min(m - 1);
            let node = |j: usize| if j == 0 || j == m { 0.0 } else { coeffs[j - 1] };
            let l = x / h - i as f64;
            (1.0 - l) * node(i) + l * node(i + 1)
        };
        let projected = l2_project(fe, &grid).unwrap();
        for (p, c) in projected.iter().zip(coeffs) {
            prop_assert!((p - c).abs() <= 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// Block systems with a coercive coefficient pattern are solved to
    /// roundoff.
    #[test]
    fn block_solver_residual(
        m in 2usize..258,
        diag in prop::array::uniform2(0.01f64..10.0),
        skew in prop::array::uniform2(-0.5f64..0.5),
        rhs_seed in prop::collection::vec(-1.0f64..1.0, 2),
    ) {
        let grid = SpatialGrid::new(m).unwrap();
        let mass = assemble_mass(&grid);
        let stiffness = assemble_stiffness(&grid);
        let off = (diag[0] * diag[1]).sqrt();
        let c = |mass: f64, stiffness: f64| BlockCoeff { mass, stiffness };
        let dof = grid.dof();
        let rhs0: Vec<f64> = (0..dof).map(|i| rhs_seed[0] * (i as f64 * 0.37).sin()).collect();
        let rhs1: Vec<f64> = (0..dof).map(|i| rhs_seed[1] * (i as f64 * 0.91).cos()).collect();
        let system = Block2System {
            mass: &mass,
            stiffness: &stiffness,
            blocks: [
                [c(0.5, diag[0]), c(0.5, skew[0] * off)],
                [c(-0.5, skew[1] * off), c(0.5, diag[1])],
            ],
            rhs: [rhs0, rhs1],
        };
        let x = solve_block2(&system).unwrap();
        let r = system.residual(&x);
        let scale = system.rhs.iter().flatten().fold(1e-300f64, |m, v| m.max(v.abs()));
        let worst = r.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        prop_assert!(worst <= 1e-11 * scale.max(1.0), "{worst:e}");
    }
}

#[test]
fn quasi_interpolants_converge_at_second_order() {
    let v = |t: f64| (3.0 * t).sin() + t.powi(3);
    let max_error = |n: usize| {
        let mesh = TimeMesh::graded(n, 1.0, 1.0).unwrap();
        let minus = pi_minus(v, &mesh);
        let plus = pi_plus(v, &mesh);
        let mut worst = 0.0f64;
        for k in 1..=n {
            let (a, b) = mesh.interval(k);
            for t in samples(a, b, 10) {
                worst = worst.max((minus.eval_in(k, t) - v(t)).abs());
                worst = worst.max((plus.eval_in(k, t) - v(t)).abs());
            }
        }
        worst
    };
    for n in [16, 32, 64] {
        let rate = (max_error(n) / max_error(2 * n)).log2();
        assert!((rate - 2.0).abs() <= 0.05, "N={n}: rate {rate}");
    }
}

fn heat_gap(alpha: f64) -> f64 {
    let m = 24;
    let mesh = TimeMesh::graded(16, 2.0, 1.0).unwrap();
    let problem = ProblemSpec::model(FracOrder::new(alpha).unwrap(), SpatialGrid::new(m).unwrap());
    let solution = solve(&problem, &mesh).unwrap();
    let oracle = heat_dg(&mesh, m);
    let scale = oracle[0].amax();
    (0..=mesh.intervals())
        .map(|n| {
            let ours = DVector::from_column_slice(solution.left_limit(n).unwrap());
            (ours - &oracle[n]).amax() / scale
        })
        .fold(0.0, f64::max)
}

#[test]
fn zero_order_is_the_heat_equation() {
    assert!(heat_gap(0.0) < 1e-12);
}

#[test]
fn small_orders_approach_the_heat_equation() {
    for alpha in [-1e-6, 1e-6, -1e-5, 1e-5] {
        let gap = heat_gap(alpha);
        assert!(gap < 1e-4, "alpha={alpha}: {gap:e}");
    }
}
