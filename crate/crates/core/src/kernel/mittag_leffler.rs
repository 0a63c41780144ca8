//! The Mittag-Leffler function `E_nu(z) = sum_p z^p / Gamma(1 + nu p)` on the
//! negative real axis, `0 < nu <= 2`.
//!
//! Three regimes:
//! * `|z| <= 1`: the defining power series.
//! * `|z|^{1/nu} >= 50`: the algebraic asymptotic series (plus, for `nu > 1`,
//!   the residue of the Laplace-transform pole), accepted only once its
//!   envelope falls below the target tolerance.
//! * otherwise: the real integral representation
//!   `E_nu(-x) = ∫_0^∞ e^{-r t} K_nu(r) dr + P_nu(t)`, `t = x^{1/nu}`, with
//!   `K_nu(r) = sin(nu pi) r^{nu-1} / (pi (r^{2nu} + 2 r^nu cos(nu pi) + 1))`,
//!   evaluated by adaptive quadrature after the substitution `w = (r t)^nu`.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::kernel::{gamma, ln_gamma};
use crate::quadrature::integrate_adaptive;

const SERIES_LIMIT: f64 = 1.0;
const ASYMPTOTIC_SCALE: f64 = 50.0;
const TOLERANCE: f64 = 1e-16;

/// `E_nu(z)` for `0 < nu <= 2` and real `z <= 0`.
pub fn mittag_leffler(nu: f64, z: f64) -> Result<f64> {
    if !(nu > 0.0 && nu <= 2.0) {
        return domain(format!("Mittag-Leffler order {nu} outside (0, 2]"));
    }
    if !(z <= 0.0) || !z.is_finite() {
        return domain(format!("Mittag-Leffler argument {z} must be finite and <= 0"));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if nu == 1.0 {
        return Ok(z.exp());
    }
    let x = -z;
    if nu == 2.0 {
        return Ok(x.sqrt().cos());
    }
    if x <= SERIES_LIMIT {
        return power_series(nu, x);
    }
    if x.powf(1.0 / nu) >= ASYMPTOTIC_SCALE {
        if let Some(value) = asymptotic(nu, x) {
            return Ok(value);
        }
    }
    integral_representation(nu, x)
}

fn power_series(nu: f64, x: f64) -> Result<f64> {
    let ln_x = x.ln();
    let mut sum = 1.0;
    for p in 1..20_000usize {
        let pf = p as f64;
        let magnitude = (pf * ln_x - ln_gamma(1.0 + nu * pf)).exp();
        let term = if p % 2 == 0 { magnitude } else { -magnitude };
        sum += term;
        if nu * pf >= 2.0 && magnitude <= TOLERANCE * 0.1 * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::Convergence {
        what: "Mittag-Leffler power series",
        detail: format!("nu = {nu}, z = {}", -x),
    })
}

/// `sin(pi y)` with the argument reduced first, so that it stays accurate near
/// integers.
fn sin_pi(y: f64) -> f64 {
    let n = y.round();
    let s = (PI * (y - n)).sin();
    if n % 2.0 == 0.0 {
        s
    } else {
        -s
    }
}

/// The exponentially small residue contribution present for `1 < nu < 2`.
fn pole_term(nu: f64, t: f64) -> f64 {
    if nu <= 1.0 {
        return 0.0;
    }
    let angle = PI / nu;
    2.0 / nu * (t * angle.cos()).exp() * (t * angle.sin()).cos()
}

/// `sum_{k>=1} (-1)^{k+1} x^{-k} / Gamma(1 - nu k)` with
/// `1/Gamma(1 - nu k) = sin(pi nu k) Gamma(nu k) / pi`.
fn asymptotic(nu: f64, x: f64) -> Option<f64> {
    let ln_x = x.ln();
    let mut sum = 0.0;
    let mut previous_envelope = f64::INFINITY;
    for k in 1..200usize {
        let kf = k as f64;
        let y = nu * kf;
        let envelope = (ln_gamma(y) - kf * ln_x).exp() / PI;
        if envelope > previous_envelope {
            // Past the optimal truncation point without converging.
            return None;
        }
        previous_envelope = envelope;
        let reciprocal = if y < 0.5 {
            1.0 / gamma(1.0 - y)
        } else {
            sin_pi(y) * (ln_gamma(y) - kf * ln_x).exp() / PI
        };
        let term = if y < 0.5 { reciprocal * (-kf * ln_x).exp() } else { reciprocal };
        sum += if k % 2 == 1 { term } else { -term };
        if sum != 0.0 && envelope <= TOLERANCE * sum.abs() {
            return Some(sum + pole_term(nu, x.powf(1.0 / nu)));
        }
    }
    None
}

fn integral_representation(nu: f64, x: f64) -> Result<f64> {
    // theta = nu pi, written through d = nu - 1 to keep sin(theta) accurate near nu = 1.
    let d = nu - 1.0;
    let sin_theta = -sin_pi(d);
    let one_plus_cos = 2.0 * sin_pi(0.5 * d).powi(2);
    let cos_theta = one_plus_cos - 1.0;
    let inv_nu = 1.0 / nu;

    // (w/x)^2 + 2 (w/x) cos(theta) + 1 = (w/x + cos(theta))^2 + sin(theta)^2
    let integrand = |w: f64| {
        let shifted = (w - x) / x + one_plus_cos;
        (-w.powf(inv_nu)).exp() / (shifted * shifted + sin_theta * sin_theta)
    };

    let w_max = 60f64.powf(nu);
    let mut breaks = vec![0.0];
    let center = -x * cos_theta;
    if center > 0.0 {
        let width = x * sin_theta.abs();
        for m in [-100.0, -10.0, -1.0, 0.0, 1.0, 10.0, 100.0] {
            let p = center + m * width;
            if p > *breaks.last().unwrap() && p < w_max {
                breaks.push(p);
            }
        }
    }
    if w_max > *breaks.last().unwrap() {
        breaks.push(w_max);
    }
    let integral = integrate_adaptive(integrand, &breaks, 0.0, 1e-15, 4000)?;
    let value = sin_theta / (PI * nu * x) * integral + pole_term(nu, x.powf(inv_nu));
    if !value.is_finite() {
        return Err(Error::NonFinite("Mittag-Leffler integral representation"));
    }
    Ok(value)
}
