//! Infinitely-many-players limit.
//!
//! In the limit the fraction of players who have quit by time `t` is
//! `q(t) = V^{-1}(t)`, so `V'(q) q' = 1`, and the game lasts
//! `T = V(1) - V(0)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::prize::{PrizeKind, PrizeSpec};

/// Smallest `V'` accepted before inversion is called singular.
pub const MIN_DERIVATIVE: f64 = 1e-12;
/// Default number of midpoint nodes in [`ess_perturbation`].
pub const PERTURBATION_NODES: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanFieldState {
    pub t: f64,
    /// Fraction of players who have quit.
    pub q: f64,
    /// Quitting density `1 / V'(q)`.
    pub qdot: f64,
}

fn checked_derivative(spec: &PrizeSpec, x: f64) -> Result<f64> {
    let d = spec.derivative(x)?;
    if !(d.is_finite() && d >= MIN_DERIVATIVE) {
        return Err(Error::SingularDerivative { x, derivative: d });
    }
    Ok(d)
}

/// `q(t) = V^{-1}(t)` and `q'(t) = 1 / V'(q(t))`.
pub fn q_of_t(spec: &PrizeSpec, t: f64) -> Result<MeanFieldState> {
    let q = spec.inverse(t)?;
    let d = checked_derivative(spec, q)?;
    Ok(MeanFieldState { t, q, qdot: 1.0 / d })
}

/// `q` on `points` interior nodes of `[0, V(1)]` (endpoints excluded, so
/// `V'(0) = 0` or `V'(0) = inf` do not trip the singularity check).
pub fn q_series(spec: &PrizeSpec, points: usize) -> Result<Vec<MeanFieldState>> {
    let vmax = spec.eval(1.0)?;
    let v0 = spec.eval(0.0)?;
    (0..points)
        .map(|i| q_of_t(spec, v0 + (vmax - v0) * (i as f64 + 0.5) / points as f64))
        .collect()
}

/// Total limit duration `V(1) - V(0)`.
pub fn total_duration(spec: &PrizeSpec) -> Result<f64> {
    Ok(spec.eval(1.0)? - spec.eval(0.0)?)
}

/// Mean-field density `m(t, tau) = exp(-tau / ((1-q) V'(q))) / V'(q)` of
/// players still in the game at time `t` who have waited `tau`.
pub fn m_density(spec: &PrizeSpec, t: f64, tau: f64) -> Result<f64> {
    let vmax = spec.eval(1.0)?;
    if !(t >= 0.0 && t < vmax) {
        return Err(Error::domain(t, format!("[0, {vmax})")));
    }
    if !(tau >= 0.0) {
        return Err(Error::domain(tau, "[0, inf)"));
    }
    let s = q_of_t(spec, t)?;
    let d = 1.0 / s.qdot;
    Ok((-tau / ((1.0 - s.q) * d)).exp() / d)
}

/// Leading coefficient of the payoff difference when a small fraction of
/// players switches to the quitting cdf `phi`:
///
/// ```text
/// int_0^T (phi(t) - q(t))^2 q'(t) V''(q(t)) dt = int_0^1 (phi(V(u)) - u)^2 V''(u) du.
/// ```
///
/// Positive for convex `V`, negative for concave `V`, zero for linear.
pub fn ess_perturbation(spec: &PrizeSpec, phi_cdf: impl Fn(f64) -> f64) -> Result<f64> {
    ess_perturbation_with(spec, phi_cdf, PERTURBATION_NODES)
}

/// [`ess_perturbation`] with an explicit node count. The integral is taken
/// in `u = s^2` by the midpoint rule, which absorbs the `u^{-3/2}` growth of
/// `V''` for `V(x) = x^alpha`, `alpha < 1`.
pub fn ess_perturbation_with(
    spec: &PrizeSpec,
    phi_cdf: impl Fn(f64) -> f64,
    nodes: usize,
) -> Result<f64> {
    if nodes == 0 {
        return Err(Error::invalid("perturbation quadrature needs at least one node"));
    }
    if matches!(spec.kind(), PrizeKind::Table { .. }) {
        log::warn!("V'' of a table prize comes from its interpolant, which is only C1");
    }
    let phi0 = phi_cdf(spec.eval(0.0)?);
    if !(phi0.abs() <= 1e-9) {
        return Err(Error::InvalidCdf(format!("phi(0) = {phi0}, expected 0")));
    }
    let h = 1.0 / nodes as f64;
    let mut prev_phi = phi0;
    let mut acc = 0.0;
    for i in 0..nodes {
        let s = (i as f64 + 0.5) * h;
        let u = s * s;
        let phi = phi_cdf(spec.eval(u)?);
        if !(-1e-12..=1.0 + 1e-12).contains(&phi) {
            return Err(Error::InvalidCdf(format!("phi = {phi} outside [0, 1]")));
        }
        if phi < prev_phi - 1e-12 {
            return Err(Error::InvalidCdf(format!(
                "phi decreases from {prev_phi} to {phi} near t = {}",
                spec.eval(u)?
            )));
        }
        prev_phi = phi;
        acc += (phi - u).powi(2) * spec.second_derivative(u)? * 2.0 * s;
    }
    Ok(acc * h)
}
