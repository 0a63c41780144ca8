//! The kernel family `omega_mu(t) = t^{mu-1} / Gamma(mu)`, the fractional
//! order, and the exact per-interval memory weights of the DG scheme.

mod mittag_leffler;
mod weights;

pub use mittag_leffler::mittag_leffler;
pub use weights::{
    closed_form_block, memory_load, memory_weights, separated_block, MemoryWeights, WeightBlock,
};

use crate::error::{domain, Result};

/// The fractional order `alpha` of `B_alpha = d_t^{-alpha}`.
///
/// `-1 < alpha < 0` is a Riemann–Liouville derivative (sub-diffusion),
/// `0 < alpha < 1` a fractional integral (wave-like), and `alpha = 0` the
/// identity (the heat equation).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder {
    alpha: f64,
}

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > -1.0 && alpha < 1.0) {
            return domain(format!("fractional order {alpha} must lie in (-1, 1)"));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn alpha_plus(&self) -> f64 {
        self.alpha.max(0.0)
    }

    pub fn alpha_minus(&self) -> f64 {
        self.alpha.min(0.0)
    }

    /// Order `1 + alpha` of the Mittag-Leffler function in the model solution.
    pub fn mittag_leffler_order(&self) -> f64 {
        1.0 + self.alpha
    }
}

/// `Gamma(x)` for the real arguments used by the kernels.
pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// `omega_mu(t) = t^{mu-1} / Gamma(mu)`.
pub fn omega(mu: f64, t: f64) -> Result<f64> {
    if !(mu > 0.0) || !mu.is_finite() {
        return domain(format!("kernel index mu = {mu} must be positive"));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return domain(format!("kernel argument t = {t} must be non-negative"));
    }
    if t == 0.0 {
        return match mu {
            m if m < 1.0 => domain(format!("omega_{mu} is singular at t = 0")),
            m if m == 1.0 => Ok(1.0),
            _ => Ok(0.0),
        };
    }
    if mu == 1.0 {
        return Ok(1.0);
    }
    Ok(t.powf(mu - 1.0) / gamma(mu))
}
