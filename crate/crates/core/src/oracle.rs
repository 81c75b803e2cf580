//! Closed-form Hadamard–Rybczynski reference solution (`μ = μ̄ = 1`).
//!
//! A unit spherical drop falls rigidly at `v* = −(4/15) e₃` while the fluid
//! velocity on its surface stays tangential in the co-moving frame. When the
//! reference center is offset from the sphere center by `gap = (c − c*)₃`,
//! the surface is still the unit sphere around `c*`, seen from `c`.

use crate::error::{Error, Result};
use crate::Vec3;

/// Vertical component of the terminal velocity.
pub const V_STAR_3: f64 = -4.0 / 15.0;

/// Terminal fall velocity of the unit drop.
pub fn v_star() -> Vec3 {
    Vec3::new(0.0, 0.0, V_STAR_3)
}

/// HR sphere center at time `t`.
pub fn hr_center(t: f64) -> Vec3 {
    v_star() * t
}

/// Unit radial direction `e(θ, 0)` in the `φ = 0` meridian.
pub fn radial(theta: f64) -> Vec3 {
    Vec3::new(theta.sin(), 0.0, theta.cos())
}

/// `∂θ e(θ, 0)`.
pub fn tangential(theta: f64) -> Vec3 {
    Vec3::new(theta.cos(), 0.0, -theta.sin())
}

/// Radius at colatitude `theta` of the unit sphere centred at `c*`, seen from
/// a reference point at signed vertical offset `gap = (c − c*)₃`:
/// `r̄ = −gap·cosθ + √(1 − gap² sin²θ)`.
pub fn exact_radius(gap: f64, theta: f64) -> Result<f64> {
    if gap.is_nan() || gap.abs() > 1.0 {
        return Err(Error::OracleDomain { gap });
    }
    let s = theta.sin();
    let disc = (1.0 - gap * gap * s * s).max(0.0);
    Ok(-gap * theta.cos() + disc.sqrt())
}

/// Gap `(c − c*)₃` when the center is carried by the flow from a unit sphere:
/// the solution of `ẋ = (x² − 1)/15`, `x(0) = 0`, i.e. `−tanh(t/15)`.
pub fn transported_center_gap(t: f64) -> f64 {
    -(t / 15.0).tanh()
}

/// Right-hand side of the gap ODE.
pub fn gap_rate(gap: f64) -> f64 {
    (gap * gap - 1.0) / 15.0
}

/// Surface velocity of the unit ball at `e(θ, 0)`:
/// `u = (1/15)cosθ·Qe₃ − (2/15)sinθ·Qe₁ − (1/3)e₃` with `Q` the rotation taking
/// `e₃` to `e(θ, 0)`.
pub fn unit_sphere_velocity(theta: f64) -> Vec3 {
    let (s, c) = theta.sin_cos();
    radial(theta) * (c / 15.0) - tangential(theta) * (2.0 * s / 15.0) - Vec3::z() / 3.0
}

/// `max_θ |(u(θ) − v*)·e(θ,0)|` for a velocity field sampled on the unit-sphere meridian.
pub fn hadamard_tangency_residual(thetas: &[f64], field: &[Vec3]) -> f64 {
    assert_eq!(thetas.len(), field.len(), "one velocity per colatitude");
    let vs = v_star();
    thetas
        .iter()
        .zip(field)
        .map(|(&th, u)| (u - vs).dot(&radial(th)).abs())
        .fold(0.0, f64::max)
}
