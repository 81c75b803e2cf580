//! Nonlocal surface evolution of an axisymmetric drop sedimenting in Stokes
//! flow, with the Hadamard–Rybczynski sphere as reference solution.

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod grid;
pub mod operators;
pub mod oracle;
pub mod profile;
pub mod quadrature;
pub mod run;
pub mod schemes;

pub use config::RunConfig;
pub use diagnostics::{DiagnosticsRow, ErrorMetrics};
pub use error::{Error, Result};
pub use grid::{make_grid, GridSpec};
pub use operators::{OperatorField, SurfaceQuadrature};
pub use profile::{CenterLaw, CenterState, InitialShape, RadiusProfile};
pub use run::{RunOutcome, Simulation, Termination};
pub use schemes::{SchemeKind, SimState, Stepper};

pub type Vec3 = nalgebra::Vector3<f64>;
