//! Uniform colatitude/azimuth/time discretization.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest node count accepted in either angular direction.
pub const MAX_NODES: usize = 1_000_000;

/// Discretization parameters of a run.
///
/// Colatitude nodes are `θ_i = iπ/M` for `i = 0..=M` (both poles included),
/// azimuth quadrature uses `L` cells of width `2π/L`, and the run takes
/// `N = ceil(T/dt)` explicit steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    m: usize,
    l: usize,
    dt: f64,
    t_final: f64,
    steps: usize,
}

impl GridSpec {
    pub fn new(m: usize, l: usize, dt: f64, t_final: f64) -> Result<Self> {
        if m < 4 || l < 4 {
            return Err(Error::InvalidGrid(format!(
                "need M >= 4 and L >= 4, got M = {m}, L = {l}"
            )));
        }
        if m > MAX_NODES || l > MAX_NODES {
            return Err(Error::InvalidGrid(format!(
                "M = {m}, L = {l} exceeds the limit of {MAX_NODES} nodes"
            )));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidGrid(format!("dt must be positive, got {dt}")));
        }
        if !(t_final.is_finite() && t_final > 0.0) {
            return Err(Error::InvalidGrid(format!("T must be positive, got {t_final}")));
        }
        // Guard against `T/dt` landing a hair above an integer (25/0.01 = 2500.0000000000005).
        let ratio = t_final / dt;
        let nearest = ratio.round();
        let steps = if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) {
            nearest
        } else {
            ratio.ceil()
        };
        if steps > 1e12 {
            return Err(Error::InvalidGrid(format!("T/dt = {ratio} steps is absurd")));
        }
        Ok(Self {
            m,
            l,
            dt,
            t_final,
            steps: (steps as usize).max(1),
        })
    }

    /// Number of colatitude intervals; there are `M + 1` nodes.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of azimuth quadrature cells.
    pub fn l(&self) -> usize {
        self.l
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    /// Number of time steps `N`.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn node_count(&self) -> usize {
        self.m + 1
    }

    pub fn d_theta(&self) -> f64 {
        PI / self.m as f64
    }

    pub fn d_phi(&self) -> f64 {
        2.0 * PI / self.l as f64
    }

    /// Colatitude of node `i`. The southern half mirrors the northern one, so
    /// `theta(i) + theta(M − i) == π` holds exactly.
    pub fn theta(&self, i: usize) -> f64 {
        debug_assert!(i <= self.m);
        match (2 * i).cmp(&self.m) {
            std::cmp::Ordering::Less => i as f64 * PI / self.m as f64,
            std::cmp::Ordering::Equal => FRAC_PI_2,
            std::cmp::Ordering::Greater => PI - (self.m - i) as f64 * PI / self.m as f64,
        }
    }

    pub fn thetas(&self) -> Vec<f64> {
        (0..=self.m).map(|i| self.theta(i)).collect()
    }

    /// Time of step `n`, computed as `n·dt` (not accumulated).
    pub fn time(&self, n: usize) -> f64 {
        n as f64 * self.dt
    }

    /// Step index closest to time `t`, clamped to `0..=N`.
    pub fn step_at(&self, t: f64) -> usize {
        let n = (t / self.dt).round();
        if n <= 0.0 {
            0
        } else {
            (n as usize).min(self.steps)
        }
    }

    /// Same grid with a different colatitude resolution.
    pub fn with_m(&self, m: usize) -> Result<Self> {
        Self::new(m, self.l, self.dt, self.t_final)
    }
}

/// Convenience wrapper around [`GridSpec::new`].
pub fn make_grid(m: usize, l: usize, dt: f64, t_final: f64) -> Result<GridSpec> {
    GridSpec::new(m, l, dt, t_final)
}
