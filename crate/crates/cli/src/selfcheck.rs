use std::f64::consts::PI;

use anyhow::Result;
use droplet_core::grid::make_grid;
use droplet_core::operators::{
    center_velocity, derivative, quadrature_tolerance, single_layer_potential,
    sphere_identity_integrals, velocity_surface, velocity_volume, volume_flux_balance,
    SphereIdentities,
};
use droplet_core::oracle::hadamard_tangency_residual;
use droplet_core::{OperatorField, RadiusProfile, SurfaceQuadrature};

struct Check {
    name: String,
    value: f64,
    reference: f64,
    error: f64,
    tolerance: f64,
}

impl Check {
    fn relative(name: &str, value: f64, reference: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            reference,
            error: (value - reference).abs() / reference.abs(),
            tolerance,
        }
    }

    fn absolute(name: &str, value: f64, reference: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            reference,
            error: (value - reference).abs(),
            tolerance,
        }
    }

    fn pass(&self) -> bool {
        self.error <= self.tolerance
    }
}

fn checks(m: usize, l: usize) -> Result<Vec<Check>> {
    let tol = quadrature_tolerance(m, l);
    let mut out = Vec::new();

    let got = sphere_identity_integrals(l, m);
    let want = SphereIdentities::exact();
    out.push(Check::relative("I1 (z)", got.i1.z, want.i1.z, tol));
    out.push(Check::relative("I2", got.i2, want.i2, tol));
    out.push(Check::relative("I3 (x)", got.i3.x, want.i3.x, tol));
    out.push(Check::relative("I4 (z)", got.i4.z, want.i4.z, tol));
    for th in [0.0, PI / 3.0, PI / 2.0, PI] {
        let name = format!("single layer at theta = {th:.4}");
        out.push(Check::relative(&name, single_layer_potential(th, m, l), 4.0 * PI, tol));
    }

    let grid = make_grid(m, l, 0.01, 1.0)?;
    let r = RadiusProfile::constant(grid, 1.0);
    let quad = SurfaceQuadrature::for_grid(&grid);
    let field = OperatorField::assemble(&quad, &r, 0.0, true)?;
    let residual = hadamard_tangency_residual(&grid.thetas(), &field.u);
    out.push(Check::absolute("Hadamard tangency residual", residual, 0.0, tol));

    let dr = derivative(&r);
    let mut discrepancy = 0.0f64;
    for th in grid.thetas() {
        let d = velocity_surface(&r, &dr, th)? - velocity_volume(&r, th)?;
        discrepancy = discrepancy.max(d.amax());
    }
    out.push(Check::absolute("surface vs volume velocity", discrepancy, 0.0, 3.0 * tol));

    let cdot = center_velocity(&r);
    out.push(Check::absolute("transported center velocity", cdot, -1.0 / 3.0, 1e-6));
    let field = OperatorField::assemble(&quad, &r, cdot, true)?;
    let balance = volume_flux_balance(&r, &field);
    out.push(Check::absolute("volume flux balance", balance, 0.0, tol));
    Ok(out)
}

/// Print the check table; `Ok(false)` when any check fails.
pub fn run(m: usize, l: usize) -> Result<bool> {
    let results = checks(m, l)?;
    println!("selfcheck at M = {m}, L = {l}, tol = {:.3e}", quadrature_tolerance(m, l));
    println!(
        "{:<34} {:>20} {:>20} {:>11} {:>11}  result",
        "check", "value", "reference", "error", "tolerance"
    );
    for c in &results {
        println!(
            "{:<34} {:>20.12e} {:>20.12e} {:>11.3e} {:>11.3e}  {}",
            c.name,
            c.value,
            c.reference,
            c.error,
            c.tolerance,
            if c.pass() { "PASS" } else { "FAIL" }
        );
    }
    Ok(results.iter().all(Check::pass))
}
