//! Explicit time stepping of the radius profile and the reference center.
//!
//! All three schemes read `A₁`, `A₂` from the field evaluated on `rⁿ` and
//! update interior nodes `1..M−1`. The pole nodes only see the source,
//! `rⁿ⁺¹ = rⁿ + Δt·A₂`, because `A₁` vanishes there.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::operators::{center_velocity, OperatorField, SurfaceQuadrature};
use crate::oracle::V_STAR_3;
use crate::profile::{CenterLaw, CenterState, RadiusProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    /// First-order upwind finite differences on the advective form.
    Upwind,
    /// Upwind finite volumes on `∂t r + ∂θ(r A₁) = A₂ + r ∂θA₁`.
    FiniteVolume,
    /// Lax–Friedrichs fluxes on the same conservative form.
    LaxFriedrichs,
}

impl SchemeKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Upwind => "upwind",
            Self::FiniteVolume => "fv",
            Self::LaxFriedrichs => "lf",
        }
    }

    /// Advance the node values by one step with the given coefficients.
    pub fn update(&self, r: &[f64], field: &OperatorField, dt: f64, d_theta: f64) -> Vec<f64> {
        match self {
            Self::Upwind => upwind_update(r, field, dt, d_theta),
            Self::FiniteVolume => finite_volume_update(r, field, dt, d_theta),
            Self::LaxFriedrichs => lax_friedrichs_update(r, field, dt, d_theta),
        }
    }
}

impl std::str::FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "upwind" | "fd" => Ok(Self::Upwind),
            "fv" | "finite_volume" | "finite-volume" => Ok(Self::FiniteVolume),
            "lf" | "lax_friedrichs" | "lax-friedrichs" => Ok(Self::LaxFriedrichs),
            other => Err(Error::Config(format!(
                "unknown scheme '{other}' (expected upwind, fv or lf)"
            ))),
        }
    }
}

fn with_poles(r: &[f64], field: &OperatorField, dt: f64) -> Vec<f64> {
    let m = r.len() - 1;
    let mut next = vec![0.0; m + 1];
    next[0] = r[0] + dt * field.a2[0];
    next[m] = r[m] + dt * field.a2[m];
    next
}

pub fn upwind_update(r: &[f64], field: &OperatorField, dt: f64, d_theta: f64) -> Vec<f64> {
    let m = r.len() - 1;
    let ratio = dt / d_theta;
    let (a1, a2) = (&field.a1, &field.a2);
    let mut next = with_poles(r, field, dt);
    for i in 1..m {
        let diff = if a1[i] >= 0.0 {
            r[i] - r[i - 1]
        } else {
            r[i + 1] - r[i]
        };
        next[i] = r[i] - ratio * a1[i] * diff + dt * a2[i];
    }
    next
}

/// Source of the conservative form, `A₂ + r ∂θA₁` with a centred difference.
fn conservative_source(r: &[f64], field: &OperatorField, i: usize, d_theta: f64) -> f64 {
    field.a2[i] + r[i] * (field.a1[i + 1] - field.a1[i - 1]) / (2.0 * d_theta)
}

fn conservative_update(
    r: &[f64],
    field: &OperatorField,
    dt: f64,
    d_theta: f64,
    flux: impl Fn(usize) -> f64,
) -> Vec<f64> {
    let m = r.len() - 1;
    let ratio = dt / d_theta;
    // flux[i] is the flux through the face between nodes i and i + 1
    let faces: Vec<f64> = (0..m).map(flux).collect();
    let mut next = with_poles(r, field, dt);
    for i in 1..m {
        let source = conservative_source(r, field, i, d_theta);
        next[i] = r[i] - ratio * (faces[i] - faces[i - 1]) + dt * source;
    }
    next
}

pub fn finite_volume_update(r: &[f64], field: &OperatorField, dt: f64, d_theta: f64) -> Vec<f64> {
    let a1 = &field.a1;
    conservative_update(r, field, dt, d_theta, |i| {
        let speed = (a1[i] + a1[i + 1]) / 2.0;
        if speed >= 0.0 {
            speed * r[i]
        } else {
            speed * r[i + 1]
        }
    })
}

pub fn lax_friedrichs_update(r: &[f64], field: &OperatorField, dt: f64, d_theta: f64) -> Vec<f64> {
    let a1 = &field.a1;
    conservative_update(r, field, dt, d_theta, |i| {
        (r[i + 1] * a1[i + 1] + r[i] * a1[i]) / 2.0 - d_theta / (2.0 * dt) * (r[i + 1] - r[i])
    })
}

/// Courant number of a step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CflReport {
    pub max_a1: f64,
    pub courant: f64,
    pub ok: bool,
}

pub fn cfl_check(field: &OperatorField, grid: &GridSpec) -> CflReport {
    let max_a1 = field.max_abs_a1();
    let courant = max_a1 * grid.dt() / grid.d_theta();
    CflReport {
        max_a1,
        courant,
        ok: courant < 1.0,
    }
}

/// Profile, center and cached operators at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub r: RadiusProfile,
    pub center: CenterState,
    pub step: usize,
    /// Operators evaluated on `r`; `None` once the profile is degenerate.
    pub field: Option<OperatorField>,
}

impl SimState {
    pub fn is_degenerate(&self) -> bool {
        self.field.is_none()
    }
}

/// Everything needed to advance a [`SimState`].
#[derive(Debug, Clone)]
pub struct Stepper {
    grid: GridSpec,
    quad: SurfaceQuadrature,
    scheme: SchemeKind,
    law: CenterLaw,
    parallel: bool,
    allow_cfl_violation: bool,
}

impl Stepper {
    pub fn new(grid: GridSpec, scheme: SchemeKind, law: CenterLaw) -> Self {
        Self {
            quad: SurfaceQuadrature::for_grid(&grid),
            grid,
            scheme,
            law,
            parallel: false,
            allow_cfl_violation: false,
        }
    }

    pub fn parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn allow_cfl_violation(mut self, allow: bool) -> Self {
        self.allow_cfl_violation = allow;
        self
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn scheme(&self) -> SchemeKind {
        self.scheme
    }

    pub fn law(&self) -> CenterLaw {
        self.law
    }

    /// Center velocity prescribed by the law for profile `r`.
    pub fn center_rate(&self, r: &RadiusProfile) -> f64 {
        match self.law {
            CenterLaw::TransportedByFlow => center_velocity(r),
            CenterLaw::ScaledHR(lambda) => lambda * V_STAR_3,
            CenterLaw::ExactHR => V_STAR_3,
        }
    }

    pub fn evaluate(&self, r: &RadiusProfile) -> Result<OperatorField> {
        OperatorField::assemble(&self.quad, r, self.center_rate(r), self.parallel)
    }

    pub fn initial_state(&self, r0: RadiusProfile) -> Result<SimState> {
        let field = self.evaluate(&r0)?;
        Ok(SimState {
            r: r0,
            center: CenterState::initial(),
            step: 0,
            field: Some(field),
        })
    }

    /// One explicit step. A profile that reaches `min r <= 0` is returned
    /// with `field = None`; stepping such a state again is an error.
    pub fn step(&self, state: &SimState) -> Result<SimState> {
        let field = match &state.field {
            Some(f) => f,
            None => {
                let (min, index) = state.r.min();
                return Err(Error::DegenerateProfile { min, index });
            }
        };
        let cfl = cfl_check(field, &self.grid);
        if !cfl.ok && !self.allow_cfl_violation {
            return Err(Error::CflViolation {
                step: state.step,
                courant: cfl.courant,
            });
        }

        let dt = self.grid.dt();
        let values = self
            .scheme
            .update(state.r.values(), field, dt, self.grid.d_theta());
        let r = RadiusProfile::new(self.grid, values)?;

        let step = state.step + 1;
        let t = self.grid.time(step);
        let cstar3 = CenterState::hr_center(t);
        let c3 = match self.law {
            CenterLaw::ExactHR => cstar3,
            _ => state.center.c3 + dt * field.cdot3,
        };
        let center = CenterState { c3, cstar3, t };

        let field = if r.is_degenerate() {
            None
        } else {
            Some(self.evaluate(&r)?)
        };
        Ok(SimState {
            r,
            center,
            step,
            field,
        })
    }
}
