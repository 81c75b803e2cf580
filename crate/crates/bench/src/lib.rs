//! Fixtures shared by the benchmarks.

use droplet_core::{make_grid, RadiusProfile};

/// A smooth, non-spherical profile at resolution `(m, l)`.
pub fn perturbed_sphere(m: usize, l: usize) -> RadiusProfile {
    let grid = make_grid(m, l, 0.01, 1.0).expect("valid benchmark grid");
    RadiusProfile::from_fn(grid, |t| 1.0 + 0.1 * t.cos() + 0.05 * (2.0 * t).cos())
        .expect("finite profile")
}
