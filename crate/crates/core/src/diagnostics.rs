//! Error metrics against the HR oracle, volume conservation and meridian
//! section curves.

use std::f64::consts::PI;

use crate::error::Result;
use crate::oracle::exact_radius;
use crate::profile::RadiusProfile;
use crate::quadrature::trapezoid;

/// Volume of the unit ball.
pub const UNIT_BALL_VOLUME: f64 = 4.0 * PI / 3.0;

/// Column names of [`DiagnosticsRow::csv_line`].
pub const CSV_HEADER: &str = "t,gap_abs,e1,e2,vol_rel,min_r,e2_sum";

/// Per-output-time record.
///
/// `e1`, `e2` are absent when the oracle is undefined (`|gap| > 1`, or a
/// non-spherical initial shape). `vol_rel` is absent once the profile has a
/// non-positive radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRow {
    pub t: f64,
    pub gap_abs: f64,
    pub e1: Option<f64>,
    pub e2: Option<f64>,
    /// `Σᵢ |rᵢ − r̄ᵢ|` before normalization.
    pub e2_sum: Option<f64>,
    pub vol_rel: Option<f64>,
    pub min_r: f64,
}

impl DiagnosticsRow {
    /// One CSV line (no trailing newline) with 12 significant digits.
    pub fn csv_line(&self) -> String {
        [
            fmt_num(self.t),
            fmt_num(self.gap_abs),
            fmt_opt(self.e1),
            fmt_opt(self.e2),
            fmt_opt(self.vol_rel),
            fmt_num(self.min_r),
            fmt_opt(self.e2_sum),
        ]
        .join(",")
    }
}

/// 12 significant digits in scientific notation.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.11e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}

/// Distance of a profile from the oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorMetrics {
    /// `maxᵢ |rᵢ − r̄(θᵢ)|`
    pub e1: f64,
    /// `Σᵢ |rᵢ − r̄(θᵢ)| / (M + 1)`
    pub e2: f64,
    pub sum: f64,
}

pub fn error_metrics(r: &RadiusProfile, gap: f64) -> Result<ErrorMetrics> {
    let g = r.grid();
    let mut e1 = 0.0f64;
    let mut sum = 0.0;
    for (i, v) in r.values().iter().enumerate() {
        let err = (v - exact_radius(gap, g.theta(i))?).abs();
        e1 = e1.max(err);
        sum += err;
    }
    Ok(ErrorMetrics {
        e1,
        e2: sum / r.len() as f64,
        sum,
    })
}

/// Enclosed volume `(2π/3)∫ r³ sinθ dθ`, trapezoid rule on the nodes.
pub fn volume(r: &RadiusProfile) -> f64 {
    let g = r.grid();
    let samples: Vec<f64> = r
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| v * v * v * g.theta(i).sin())
        .collect();
    2.0 * PI / 3.0 * trapezoid(&samples, g.d_theta())
}

/// `|vol − reference| / reference`.
pub fn relative_volume_error(vol: f64, reference: f64) -> f64 {
    (vol - reference).abs() / reference
}

/// Meridian section `(r sinθ, c₃ + r cosθ)` from the north pole to the south
/// pole, followed by its mirror image at negative abscissa back up
/// (poles are not repeated): `2M` points for `M + 1` nodes.
pub fn section_curve(r: &RadiusProfile, c3: f64) -> Vec<(f64, f64)> {
    let g = r.grid();
    let m = g.m();
    let right: Vec<(f64, f64)> = (0..=m)
        .map(|i| {
            let (s, c) = g.theta(i).sin_cos();
            (r[i] * s, c3 + r[i] * c)
        })
        .collect();
    let left = right[1..m].iter().rev().map(|&(x, z)| (-x, z));
    right.iter().copied().chain(left).collect()
}
