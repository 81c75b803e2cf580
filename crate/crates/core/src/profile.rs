//! Radius profiles, initial shapes and the reference-center state.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::oracle::V_STAR_3;

/// Radius `r(θ_i)` sampled on the nodes of a [`GridSpec`].
///
/// A profile with a non-positive entry can be represented (the scaled
/// center law drives the south pole through zero) but is *degenerate*:
/// operator evaluation refuses it.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusProfile {
    values: Vec<f64>,
    grid: GridSpec,
}

impl RadiusProfile {
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.node_count() {
            return Err(Error::InvalidShape(format!(
                "expected {} samples, got {}",
                grid.node_count(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidShape(format!("non-finite radius at node {i}")));
        }
        Ok(Self { values, grid })
    }

    pub fn constant(grid: GridSpec, value: f64) -> Self {
        Self {
            values: vec![value; grid.node_count()],
            grid,
        }
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.thetas().into_iter().map(f).collect();
        Self::new(grid, values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Smallest radius and the node where it occurs.
    pub fn min(&self) -> (f64, usize) {
        self.values
            .iter()
            .copied()
            .enumerate()
            .fold((f64::INFINITY, 0), |(m, k), (i, v)| if v < m { (v, i) } else { (m, k) })
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_degenerate(&self) -> bool {
        self.min().0 <= 0.0
    }

    /// Errors with [`Error::DegenerateProfile`] when `min r <= 0`.
    pub fn ensure_positive(&self) -> Result<()> {
        let (min, index) = self.min();
        if min <= 0.0 {
            Err(Error::DegenerateProfile { min, index })
        } else {
            Ok(())
        }
    }
}

impl std::ops::Index<usize> for RadiusProfile {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

/// Initial droplet shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialShape {
    UnitSphere,
    /// Elongated along the vertical axis: `r(θ) = 1/√(1 − ¾cos²θ)`.
    ProlateEllipsoid,
    /// Flattened along the vertical axis: `r(θ) = 1/√(1 − ¾sin²θ)`.
    OblateEllipsoid,
    /// Radii sampled on the run grid.
    Custom(Vec<f64>),
}

impl InitialShape {
    /// Radius at colatitude `theta` for the analytic shapes.
    pub fn radius_at(&self, theta: f64) -> Option<f64> {
        match self {
            Self::UnitSphere => Some(1.0),
            Self::ProlateEllipsoid => {
                let c = theta.cos();
                Some(1.0 / (1.0 - 0.75 * c * c).sqrt())
            }
            Self::OblateEllipsoid => {
                let s = theta.sin();
                Some(1.0 / (1.0 - 0.75 * s * s).sqrt())
            }
            Self::Custom(_) => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::UnitSphere => "sphere",
            Self::ProlateEllipsoid => "prolate",
            Self::OblateEllipsoid => "oblate",
            Self::Custom(_) => "custom",
        }
    }
}

impl std::str::FromStr for InitialShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sphere" | "unit_sphere" => Ok(Self::UnitSphere),
            "prolate" | "prolate_ellipsoid" => Ok(Self::ProlateEllipsoid),
            "oblate" | "oblate_ellipsoid" => Ok(Self::OblateEllipsoid),
            other => Err(Error::Config(format!(
                "unknown shape '{other}' (expected sphere, prolate or oblate)"
            ))),
        }
    }
}

/// Sample an initial shape on the grid nodes.
pub fn sample_shape(shape: &InitialShape, grid: &GridSpec) -> Result<RadiusProfile> {
    let profile = match shape {
        InitialShape::Custom(values) => RadiusProfile::new(*grid, values.clone())?,
        analytic => RadiusProfile::from_fn(*grid, |th| {
            analytic.radius_at(th).expect("analytic shape")
        })?,
    };
    let (min, index) = profile.min();
    if min <= 0.0 {
        return Err(Error::DegenerateProfile { min, index });
    }
    Ok(profile)
}

/// How the reference center moves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CenterLaw {
    /// Center carried by the flow: `ċ₃ = −¼∫r² sinθ (1 − ½sin²θ) dθ`.
    TransportedByFlow,
    /// `ċ = λ v*`.
    ScaledHR(f64),
    /// Center pinned to the Hadamard–Rybczynski center, `c ≡ c*`.
    ExactHR,
}

impl CenterLaw {
    pub fn name(&self) -> String {
        match self {
            Self::TransportedByFlow => "flow".to_string(),
            Self::ScaledHR(lambda) => format!("scaled:{lambda}"),
            Self::ExactHR => "exact".to_string(),
        }
    }
}

impl std::str::FromStr for CenterLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "flow" | "transported" => return Ok(Self::TransportedByFlow),
            "exact" | "hr" => return Ok(Self::ExactHR),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("scaled") {
            let rest = rest.trim_start_matches([':', '=']);
            let lambda = parse_lambda(rest)?;
            return Ok(Self::ScaledHR(lambda));
        }
        Err(Error::Config(format!(
            "unknown center law '{s}' (expected flow, scaled:<lambda> or exact)"
        )))
    }
}

/// Accepts a decimal or a `p/q` fraction such as `17/2`.
pub(crate) fn parse_lambda(s: &str) -> Result<f64> {
    let s = s.trim();
    let value = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad_lambda(s))?;
            let q: f64 = q.trim().parse().map_err(|_| bad_lambda(s))?;
            p / q
        }
        None => s.parse().map_err(|_| bad_lambda(s))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad_lambda(s))
    }
}

fn bad_lambda(s: &str) -> Error {
    Error::Config(format!("invalid lambda '{s}'"))
}

/// Vertical position of the reference center and of the HR sphere center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenterState {
    pub c3: f64,
    pub cstar3: f64,
    pub t: f64,
}

impl CenterState {
    pub fn initial() -> Self {
        Self {
            c3: 0.0,
            cstar3: 0.0,
            t: 0.0,
        }
    }

    /// Signed gap `(c − c*)₃`.
    pub fn gap(&self) -> f64 {
        self.c3 - self.cstar3
    }

    /// HR center height at time `t`.
    pub fn hr_center(t: f64) -> f64 {
        V_STAR_3 * t
    }
}
