//! Dense classical DG oracle for the heat equation.

use fracdg::TimeMesh;
use nalgebra::{DMatrix, DVector};

/// Classical piecewise-linear DG for `u' + Au = 0`, dense, with `U^0` the
/// exact L2 projection of `x(1-x)`.
pub fn heat_dg(mesh: &TimeMesh, m: usize) -> Vec<DVector<f64>> {
    let dof = m - 1;
    let h = 1.0 / m as f64;
    let mut mass = DMatrix::<f64>::zeros(dof, dof);
    let mut stiff = DMatrix::<f64>::zeros(dof, dof);
    for i in 0..dof {
        mass[(i, i)] = 4.0 * h / 6.0;
        stiff[(i, i)] = 2.0 / h;
        if i + 1 < dof {
            mass[(i, i + 1)] = h / 6.0;
            mass[(i + 1, i)] = h / 6.0;
            stiff[(i, i + 1)] = -1.0 / h;
            stiff[(i + 1, i)] = -1.0 / h;
        }
    }
    let load = DVector::from_fn(dof, |i, _| {
        let x = (i + 1) as f64 * h;
        h * x - h * x * x - h.powi(3) / 6.0
    });
    let mut current = mass.clone().lu().solve(&load).unwrap();
    let mut left = vec![current.clone()];
    for n in 1..=mesh.intervals() {
        let k = mesh.step(n);
        let mut system = DMatrix::<f64>::zeros(2 * dof, 2 * dof);
        let blocks = [
            [&mass * 0.5 + &stiff * (k / 3.0), &mass * 0.5 + &stiff * (k / 6.0)],
            [&mass * -0.5 + &stiff * (k / 6.0), &mass * 0.5 + &stiff * (k / 3.0)],
        ];
        for (b, row) in blocks.iter().enumerate() {
            for (a, block) in row.iter().enumerate() {
                system.view_mut((b * dof, a * dof), (dof, dof)).copy_from(block);
            }
        }
        let mut rhs = DVector::<f64>::zeros(2 * dof);
        rhs.rows_mut(0, dof).copy_from(&(&mass * &current));
        let x = system.lu().solve(&rhs).unwrap();
        current = x.rows(dof, dof).into_owned();
        left.push(current.clone());
    }
    left
}

