//! Boundary-integral evaluation of the surface velocity and of the
//! coefficients `A₁[r]`, `A₂[r]` of the radius equation
//! `∂t r + A₁[r] ∂θ r = A₂[r]`.
//!
//! The velocity of the fluid at the surface point `c + r(θ)e(θ,0)` is a
//! double integral over the droplet surface with a `1/β` kernel, where `β`
//! is the chord length between the evaluation point and the integration
//! point. `β` vanishes at `(θ̄, φ̄) = (θ, 0)`. The integral is evaluated with
//! the midpoint rule on cells whose centres sit half a cell away from the
//! colatitude nodes and from `φ̄ = 0`, so the kernel is never evaluated at
//! the singular point.

use std::f64::consts::PI;

use nalgebra::Matrix3;
use rayon::prelude::*;

use crate::error::Result;
use crate::grid::GridSpec;
use crate::oracle::{radial, tangential};
use crate::profile::RadiusProfile;
use crate::quadrature::{simpson, UnitGauss};
use crate::Vec3;

const INV_8PI: f64 = 1.0 / (8.0 * PI);

/// Default number of Gauss–Legendre points along each ray of [`velocity_volume`].
pub const DEFAULT_RADIAL_POINTS: usize = 8;

/// Declared accuracy of the staggered midpoint rule at resolution `(M, L)`.
///
/// First order in the coarser direction; the constant is set so that the
/// four unit-sphere identities are met to 1% at `M = 100, L = 200`.
pub fn quadrature_tolerance(m: usize, l: usize) -> f64 {
    1.0 / m.min(l) as f64
}

/// Chord length between `r(θ)e(θ,0)` and `r(θ̄)e(θ̄,φ̄)`.
///
/// Uses `β² = (r − r̄)² + 4 r r̄ (sin²((θ−θ̄)/2) + sinθ sinθ̄ sin²(φ̄/2))`,
/// which is algebraically the law of cosines but does not cancel when the
/// two points are close.
pub fn beta(r_theta: f64, r_bar: f64, theta: f64, theta_bar: f64, phi_bar: f64) -> f64 {
    let half_dt = (0.5 * (theta - theta_bar)).sin();
    let half_phi = (0.5 * phi_bar).sin();
    let dr = r_theta - r_bar;
    let angular = half_dt * half_dt + theta.sin() * theta_bar.sin() * half_phi * half_phi;
    (dr * dr + 4.0 * r_theta * r_bar * angular).max(0.0).sqrt()
}

/// Law-of-cosines form of [`beta`]; loses precision for nearby points.
pub fn beta_expanded(r_theta: f64, r_bar: f64, theta: f64, theta_bar: f64, phi_bar: f64) -> f64 {
    let cos_angle = theta.sin() * theta_bar.sin() * phi_bar.cos() + theta.cos() * theta_bar.cos();
    (r_theta * r_theta + r_bar * r_bar - 2.0 * r_theta * r_bar * cos_angle)
        .max(0.0)
        .sqrt()
}

/// Discrete `∂θ r` on the profile nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeStencil {
    pub dr: Vec<f64>,
}

/// Second-order centred differences inside, second-order one-sided at the poles.
pub fn derivative(r: &RadiusProfile) -> DerivativeStencil {
    let v = r.values();
    let m = v.len() - 1;
    let h = r.grid().d_theta();
    let mut dr = vec![0.0; m + 1];
    for i in 1..m {
        dr[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    }
    dr[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    dr[m] = (3.0 * v[m] - 4.0 * v[m - 1] + v[m - 2]) / (2.0 * h);
    DerivativeStencil { dr }
}

/// Oseen tensor `Φ(x) = (I/|x| + x⊗x/|x|³)/8π`.
pub fn oseen_tensor(x: &Vec3) -> Matrix3<f64> {
    let d = x.norm();
    (Matrix3::identity() / d + x * x.transpose() / (d * d * d)) * INV_8PI
}

/// Quadrature tables for one `(M, L)` resolution.
///
/// Colatitude cells are centred at `θ̄_k = (k + ½)Δθ`, `k = 0..M`, and azimuth
/// cells at `φ̄_j = (j + ½)Δφ`, `j = 0..L`.
#[derive(Debug, Clone)]
pub struct SurfaceQuadrature {
    m: usize,
    l: usize,
    d_theta: f64,
    d_phi: f64,
    sin_bar: Vec<f64>,
    cos_bar: Vec<f64>,
    theta_bar: Vec<f64>,
    /// `sin²(φ̄_j/2)`
    half_phi_sq: Vec<f64>,
    cos_phi: Vec<f64>,
    sin_phi: Vec<f64>,
}

impl SurfaceQuadrature {
    pub fn new(m: usize, l: usize) -> Self {
        let d_theta = PI / m as f64;
        let d_phi = 2.0 * PI / l as f64;
        let theta_bar: Vec<f64> = (0..m).map(|k| (k as f64 + 0.5) * d_theta).collect();
        let phi: Vec<f64> = (0..l).map(|j| (j as f64 + 0.5) * d_phi).collect();
        Self {
            m,
            l,
            d_theta,
            d_phi,
            sin_bar: theta_bar.iter().map(|t| t.sin()).collect(),
            cos_bar: theta_bar.iter().map(|t| t.cos()).collect(),
            theta_bar,
            half_phi_sq: phi.iter().map(|p| (0.5 * p).sin().powi(2)).collect(),
            cos_phi: phi.iter().map(|p| p.cos()).collect(),
            sin_phi: phi.iter().map(|p| p.sin()).collect(),
        }
    }

    pub fn for_grid(grid: &GridSpec) -> Self {
        Self::new(grid.m(), grid.l())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn cell_thetas(&self) -> &[f64] {
        &self.theta_bar
    }

    /// Sums `Σ_j 1/β_j`, `Σ_j cosφ̄_j/β_j`, `Σ_j sinφ̄_j/β_j` for
    /// `β_j² = a + b·sin²(φ̄_j/2)`.
    #[inline]
    fn azimuth_sums(&self, a: f64, b: f64) -> (f64, f64, f64) {
        let mut s0 = 0.0;
        let mut sc = 0.0;
        let mut ss = 0.0;
        for ((h, c), s) in self.half_phi_sq.iter().zip(&self.cos_phi).zip(&self.sin_phi) {
            let inv = 1.0 / (a + b * h).sqrt();
            s0 += inv;
            sc += c * inv;
            ss += s * inv;
        }
        (s0, sc, ss)
    }

    /// Boundary-integral velocity at `r_theta·e(theta, 0)` (relative to the
    /// reference center) for a surface given on the cell centres.
    fn velocity(&self, cells: &SurfaceCells, theta: f64, r_theta: f64) -> Vec3 {
        let (st, ct) = theta.sin_cos();
        let mut u = Vec3::zeros();
        for k in 0..self.m {
            let rb = cells.r[k];
            let half = (0.5 * (theta - self.theta_bar[k])).sin();
            let dr = r_theta - rb;
            let a = dr * dr + 4.0 * r_theta * rb * half * half;
            let b = 4.0 * r_theta * rb * st * self.sin_bar[k];
            let (s0, sc, ss) = self.azimuth_sums(a, b);
            let kern = cells.kernel[k];
            let vertical = r_theta * ct - rb * self.cos_bar[k];
            u.x += kern * vertical * sc;
            u.y += kern * vertical * ss;
            u.z += kern * (rb * self.sin_bar[k] * s0 - r_theta * st * sc);
        }
        u * (-INV_8PI * self.d_theta * self.d_phi)
    }
}

/// Radius, derivative and kernel weight interpolated to the cell centres.
#[derive(Debug, Clone)]
struct SurfaceCells {
    r: Vec<f64>,
    /// `𝒦 = (r̄ sinθ̄ − r̄' cosθ̄)·r̄ sinθ̄` without the `1/β` factor.
    kernel: Vec<f64>,
}

impl SurfaceCells {
    fn new(quad: &SurfaceQuadrature, r: &RadiusProfile, dr: &DerivativeStencil) -> Self {
        let v = r.values();
        let (rs, kernel) = (0..quad.m)
            .map(|k| {
                let rb = 0.5 * (v[k] + v[k + 1]);
                let drb = 0.5 * (dr.dr[k] + dr.dr[k + 1]);
                let (s, c) = (quad.sin_bar[k], quad.cos_bar[k]);
                (rb, (rb * s - drb * c) * rb * s)
            })
            .unzip();
        Self { r: rs, kernel }
    }
}

/// Linear interpolation of the profile at an arbitrary colatitude.
fn radius_at(r: &RadiusProfile, theta: f64) -> f64 {
    let g = r.grid();
    let x = (theta / g.d_theta()).clamp(0.0, g.m() as f64);
    let i = (x.floor() as usize).min(g.m() - 1);
    let w = x - i as f64;
    (1.0 - w) * r[i] + w * r[i + 1]
}

/// Fluid velocity `𝒰[r](θ)` at the surface point of colatitude `theta`,
/// evaluated by the staggered midpoint rule at the profile's `(M, L)`.
pub fn velocity_surface(r: &RadiusProfile, dr: &DerivativeStencil, theta: f64) -> Result<Vec3> {
    r.ensure_positive()?;
    let quad = SurfaceQuadrature::for_grid(r.grid());
    let cells = SurfaceCells::new(&quad, r, dr);
    Ok(quad.velocity(&cells, theta, radius_at(r, theta)))
}

/// Volume-integral velocity at the surface point of colatitude `theta`, by
/// direct quadrature of the Oseen tensor over the droplet. Independent of
/// [`velocity_surface`]; used to cross-check it.
pub fn velocity_volume(r: &RadiusProfile, theta: f64) -> Result<Vec3> {
    velocity_volume_with(r, theta, DEFAULT_RADIAL_POINTS)
}

/// [`velocity_volume`] with `radial_points` Gauss–Legendre nodes along each ray.
pub fn velocity_volume_with(r: &RadiusProfile, theta: f64, radial_points: usize) -> Result<Vec3> {
    r.ensure_positive()?;
    let grid = r.grid();
    let (m, l) = (grid.m(), grid.l());
    let (d_theta, d_phi) = (grid.d_theta(), grid.d_phi());
    let gauss = UnitGauss::new(radial_points);
    let x = radial(theta) * radius_at(r, theta);
    let force = -Vec3::z();

    let mut u = Vec3::zeros();
    for k in 0..m {
        let tb = (k as f64 + 0.5) * d_theta;
        let rb = 0.5 * (r[k] + r[k + 1]);
        let (sb, cb) = tb.sin_cos();
        let mut ring = Vec3::zeros();
        for j in 0..l {
            let pb = (j as f64 + 0.5) * d_phi;
            let dir = Vec3::new(sb * pb.cos(), sb * pb.sin(), cb);
            for (s, w) in gauss.nodes.iter().zip(&gauss.weights) {
                let z = s * rb;
                ring += oseen_tensor(&(x - dir * z)) * force * (w * z * z);
            }
        }
        u += ring * (rb * sb);
    }
    Ok(u * (d_theta * d_phi))
}

/// `ċ₃` for a center carried by the flow: `−¼∫₀^π r² sinθ (1 − ½sin²θ) dθ`
/// (composite Simpson on the profile nodes).
pub fn center_velocity(r: &RadiusProfile) -> f64 {
    let g = r.grid();
    let samples: Vec<f64> = r
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let s = g.theta(i).sin();
            v * v * s * (1.0 - 0.5 * s * s)
        })
        .collect();
    -0.25 * simpson(&samples, g.d_theta())
}

/// Operator values on every profile node for one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorField {
    pub a1: Vec<f64>,
    pub a2: Vec<f64>,
    pub u: Vec<Vec3>,
    pub cdot3: f64,
}

impl OperatorField {
    /// Evaluate `𝒰[r]`, `A₁[r]`, `A₂[r]` on all nodes for a center moving at
    /// `ċ = (0, 0, cdot3)`.
    ///
    /// With `parallel` the nodes are distributed over the rayon pool; each
    /// node's sum is computed in the same order either way, so the result is
    /// bit-identical.
    pub fn assemble(
        quad: &SurfaceQuadrature,
        r: &RadiusProfile,
        cdot3: f64,
        parallel: bool,
    ) -> Result<Self> {
        r.ensure_positive()?;
        let dr = derivative(r);
        let cells = SurfaceCells::new(quad, r, &dr);
        let grid = r.grid();
        let node = |i: usize| quad.velocity(&cells, grid.theta(i), r[i]);
        let u: Vec<Vec3> = if parallel {
            (0..r.len()).into_par_iter().map(node).collect()
        } else {
            (0..r.len()).map(node).collect()
        };
        Ok(Self::from_velocity(r, u, cdot3))
    }

    /// Build the coefficients from a precomputed velocity field.
    pub fn from_velocity(r: &RadiusProfile, u: Vec<Vec3>, cdot3: f64) -> Self {
        let grid = r.grid();
        let m = grid.m();
        let cdot = Vec3::new(0.0, 0.0, cdot3);
        let mut a1 = vec![0.0; m + 1];
        let mut a2 = vec![0.0; m + 1];
        for i in 0..=m {
            let th = grid.theta(i);
            let rel = u[i] - cdot;
            a2[i] = rel.dot(&radial(th));
            if i != 0 && i != m {
                a1[i] = rel.dot(&tangential(th)) / r[i];
            }
        }
        Self { a1, a2, u, cdot3 }
    }

    /// Field with prescribed coefficients, for exercising the schemes.
    pub fn from_coefficients(a1: Vec<f64>, a2: Vec<f64>) -> Self {
        let n = a1.len();
        Self {
            a1,
            a2,
            u: vec![Vec3::zeros(); n],
            cdot3: 0.0,
        }
    }

    pub fn max_abs_a1(&self) -> f64 {
        self.a1.iter().fold(0.0, |m, a| f64::max(m, a.abs()))
    }
}

/// `A₁[r](θ)` at an arbitrary colatitude; zero at the poles.
pub fn a1(r: &RadiusProfile, dr: &DerivativeStencil, cdot3: f64, theta: f64) -> Result<f64> {
    if theta <= 0.0 || theta >= PI {
        r.ensure_positive()?;
        return Ok(0.0);
    }
    let u = velocity_surface(r, dr, theta)?;
    let rel = u - Vec3::new(0.0, 0.0, cdot3);
    Ok(rel.dot(&tangential(theta)) / radius_at(r, theta))
}

/// `A₂[r](θ)` at an arbitrary colatitude.
pub fn a2(r: &RadiusProfile, dr: &DerivativeStencil, cdot3: f64, theta: f64) -> Result<f64> {
    let u = velocity_surface(r, dr, theta)?;
    Ok((u - Vec3::new(0.0, 0.0, cdot3)).dot(&radial(theta)))
}

/// `∫₀^π (A₂ − ∂θr·A₁) r² sinθ dθ`, the rate of change of the enclosed volume
/// (up to a factor 2π). Zero for the exact operators.
pub fn volume_flux_balance(r: &RadiusProfile, field: &OperatorField) -> f64 {
    let g = r.grid();
    let dr = derivative(r);
    let samples: Vec<f64> = (0..r.len())
        .map(|i| {
            let v = r[i];
            (field.a2[i] - dr.dr[i] * field.a1[i]) * v * v * g.theta(i).sin()
        })
        .collect();
    simpson(&samples, g.d_theta())
}

/// Unit-sphere integrals appearing in the Hadamard–Rybczynski computation,
/// all with the evaluation point at the north pole `e₃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereIdentities {
    /// `∫ ω/|e₃−ω| dσ`, exact `(0, 0, 4π/3)`
    pub i1: Vec3,
    /// `∫ 1/|e₃−ω| dσ`, exact `4π`
    pub i2: f64,
    /// `∫ ω₁ω/|e₃−ω| dσ`, exact `(16π/15, 0, 0)`
    pub i3: Vec3,
    /// `∫ ω₃ω/|e₃−ω| dσ`, exact `(0, 0, 28π/15)`
    pub i4: Vec3,
}

impl SphereIdentities {
    pub fn exact() -> Self {
        Self {
            i1: Vec3::new(0.0, 0.0, 4.0 * PI / 3.0),
            i2: 4.0 * PI,
            i3: Vec3::new(16.0 * PI / 15.0, 0.0, 0.0),
            i4: Vec3::new(0.0, 0.0, 28.0 * PI / 15.0),
        }
    }
}

/// Evaluate the four identities with the staggered midpoint rule on an `M × L` grid.
pub fn sphere_identity_integrals(l: usize, m: usize) -> SphereIdentities {
    let quad = SurfaceQuadrature::new(m, l);
    let w = quad.d_theta * quad.d_phi;
    let mut out = SphereIdentities {
        i1: Vec3::zeros(),
        i2: 0.0,
        i3: Vec3::zeros(),
        i4: Vec3::zeros(),
    };
    for k in 0..m {
        let (sb, cb) = (quad.sin_bar[k], quad.cos_bar[k]);
        // |e₃ − ω| = 2 sin(θ̄/2)
        let dist = 2.0 * (0.5 * quad.theta_bar[k]).sin();
        let weight = w * sb / dist;
        for j in 0..l {
            let omega = Vec3::new(sb * quad.cos_phi[j], sb * quad.sin_phi[j], cb);
            out.i1 += omega * weight;
            out.i2 += weight;
            out.i3 += omega * (omega.x * weight);
            out.i4 += omega * (omega.z * weight);
        }
    }
    out
}

/// `∫ dσ(ω)/|e(θ,0) − ω|` over the unit sphere (exact value `4π` for every θ).
pub fn single_layer_potential(theta: f64, m: usize, l: usize) -> f64 {
    let quad = SurfaceQuadrature::new(m, l);
    let (st, _) = theta.sin_cos();
    let mut sum = 0.0;
    for k in 0..m {
        let half = (0.5 * (theta - quad.theta_bar[k])).sin();
        let a = 4.0 * half * half;
        let b = 4.0 * st * quad.sin_bar[k];
        sum += quad.sin_bar[k] * quad.azimuth_sums(a, b).0;
    }
    sum * quad.d_theta * quad.d_phi
}
