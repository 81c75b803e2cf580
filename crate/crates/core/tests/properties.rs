use std::f64::consts::PI;

use droplet_core::diagnostics::{error_metrics, section_curve, volume, UNIT_BALL_VOLUME};
use droplet_core::grid::make_grid;
use droplet_core::operators::{
    beta, beta_expanded, quadrature_tolerance, OperatorField, SurfaceQuadrature,
};
use droplet_core::oracle::{exact_radius, transported_center_gap};
use droplet_core::profile::{sample_shape, InitialShape, RadiusProfile};
use droplet_core::schemes::{
    cfl_check, finite_volume_update, upwind_update, SchemeKind,
};
use proptest::prelude::*;

fn smooth_profile(m: usize, l: usize, a: f64, b: f64) -> RadiusProfile {
    let g = make_grid(m, l, 0.01, 1.0).unwrap();
    RadiusProfile::from_fn(g, |t| 1.0 + a * t.cos() + b * (2.0 * t).cos()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn grid_nodes_are_symmetric(m in 4usize..400) {
        let g = make_grid(m, 8, 0.01, 1.0).unwrap();
        for i in 0..=m {
            prop_assert_eq!(g.theta(i) + g.theta(m - i), PI);
        }
    }

    #[test]
    fn ellipsoids_are_reflection_symmetric(m in 4usize..300) {
        let g = make_grid(m, 8, 0.01, 1.0).unwrap();
        for shape in [InitialShape::ProlateEllipsoid, InitialShape::OblateEllipsoid] {
            let r = sample_shape(&shape, &g).unwrap();
            for i in 0..=m {
                prop_assert!((r[i] - r[m - i]).abs() <= 1e-13);
            }
        }
    }

    #[test]
    fn stabilized_beta_matches_expansion(
        r in 0.1f64..3.0, rb in 0.1f64..3.0,
        th in 0.0f64..PI, tb in 0.0f64..PI, pb in 0.0f64..2.0 * PI,
    ) {
        let b = beta(r, rb, th, tb, pb);
        let e = beta_expanded(r, rb, th, tb, pb);
        prop_assert!(b >= 0.0);
        if b > 1e-6 {
            // cancellation in the expanded form is bounded by ε·(r² + r̄²)/β²
            let tol = 1e-12f64.max(8.0 * f64::EPSILON * (r * r + rb * rb) / (b * b));
            prop_assert!((b - e).abs() / b <= tol, "b={b} e={e}");
        }
    }

    #[test]
    fn exact_radius_solves_quadratic(gap in -1.0f64..=1.0, th in 0.0f64..=PI) {
        let r = exact_radius(gap, th).unwrap();
        prop_assert!(r >= -1e-15);
        prop_assert!((r * r + 2.0 * gap * r * th.cos() + gap * gap - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn exact_radius_pole_values(gap in -1.0f64..=1.0) {
        prop_assert!((exact_radius(gap, 0.0).unwrap() - (1.0 - gap)).abs() <= 1e-15);
        prop_assert!((exact_radius(gap, PI).unwrap() - (1.0 + gap)).abs() <= 1e-15);
    }

    #[test]
    fn exact_shape_encloses_unit_volume(gap in -0.95f64..0.95) {
        let g = make_grid(400, 8, 0.01, 1.0).unwrap();
        let r = RadiusProfile::from_fn(g, |t| exact_radius(gap, t).unwrap()).unwrap();
        prop_assert!(((volume(&r) - UNIT_BALL_VOLUME) / UNIT_BALL_VOLUME).abs() <= 1e-3);
    }

    #[test]
    fn oracle_profiles_have_zero_error(gap in -1.0f64..=1.0, m in 4usize..200) {
        let g = make_grid(m, 8, 0.01, 1.0).unwrap();
        let r = RadiusProfile::from_fn(g, |t| exact_radius(gap, t).unwrap()).unwrap();
        let e = error_metrics(&r, gap).unwrap();
        prop_assert_eq!((e.e1, e.e2), (0.0, 0.0));
    }

    #[test]
    fn transported_gap_decreases_toward_minus_one(t in 0.0f64..200.0, dt in 1e-3f64..10.0) {
        let (a, b) = (transported_center_gap(t), transported_center_gap(t + dt));
        prop_assert!(b < a || a <= -1.0 + 1e-15);
        prop_assert!(b >= -1.0 && a <= 0.0);
    }

    #[test]
    fn section_curve_point_count(m in 4usize..300, c3 in -10.0f64..10.0) {
        let g = make_grid(m, 8, 0.01, 1.0).unwrap();
        let pts = section_curve(&RadiusProfile::constant(g, 1.3), c3);
        prop_assert_eq!(pts.len(), 2 * (m + 1) - 2);
    }

    #[test]
    fn upwind_is_monotone_under_cfl(
        r in prop::collection::vec(0.2f64..3.0, 6..40),
        speeds in prop::collection::vec(-1.0f64..1.0, 40),
        courant in 0.0f64..0.99,
    ) {
        let m = r.len() - 1;
        let dth = PI / m as f64;
        let scale = speeds.iter().fold(1e-12f64, |s, v| s.max(v.abs()));
        let mut a1: Vec<f64> = speeds[..=m].to_vec();
        a1[0] = 0.0;
        a1[m] = 0.0;
        let dt = courant * dth / scale;
        let f = OperatorField::from_coefficients(a1, vec![0.0; m + 1]);
        let next = upwind_update(&r, &f, dt, dth);
        let lo = r.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = r.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for v in &next[1..m] {
            prop_assert!(*v >= lo - 1e-14 && *v <= hi + 1e-14);
        }
    }

    #[test]
    fn finite_volume_matches_simplified_form_for_negative_speeds(
        r in prop::collection::vec(0.2f64..3.0, 6..40),
        speeds in prop::collection::vec(-1.0f64..-1e-3, 40),
        a2 in prop::collection::vec(-1.0f64..1.0, 40),
    ) {
        let m = r.len() - 1;
        let dth = PI / m as f64;
        let dt = 0.01;
        let mut a1: Vec<f64> = speeds[..=m].to_vec();
        a1[0] = 0.0;
        a1[m] = 0.0;
        let a2 = a2[..=m].to_vec();
        let f = OperatorField::from_coefficients(a1.clone(), a2.clone());
        let next = finite_volume_update(&r, &f, dt, dth);
        for i in 1..m {
            let simple = r[i] - dt / dth * 0.5 * (a1[i] + a1[i + 1]) * (r[i + 1] - r[i]) + dt * a2[i];
            prop_assert!((next[i] - simple).abs() <= 1e-12 * (1.0 + simple.abs()));
        }
    }

    #[test]
    fn poles_depend_only_on_their_source(
        r in prop::collection::vec(0.2f64..3.0, 6..30),
        a1 in prop::collection::vec(-2.0f64..2.0, 30),
        a2 in prop::collection::vec(-1.0f64..1.0, 30),
    ) {
        let m = r.len() - 1;
        let a2 = a2[..=m].to_vec();
        for scheme in [SchemeKind::Upwind, SchemeKind::FiniteVolume, SchemeKind::LaxFriedrichs] {
            let f = OperatorField::from_coefficients(a1[..=m].to_vec(), a2.clone());
            let next = scheme.update(&r, &f, 0.01, PI / m as f64);
            prop_assert_eq!(next[0], r[0] + 0.01 * a2[0]);
            prop_assert_eq!(next[m], r[m] + 0.01 * a2[m]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn field_is_axisymmetric_and_pole_free(a in -0.3f64..0.3, b in -0.2f64..0.2) {
        let r = smooth_profile(16, 32, a, b);
        let quad = SurfaceQuadrature::for_grid(r.grid());
        let f = OperatorField::assemble(&quad, &r, -0.3, false).unwrap();
        prop_assert_eq!(f.a1[0], 0.0);
        prop_assert_eq!(f.a1[16], 0.0);
        let tol = quadrature_tolerance(16, 32);
        for u in &f.u {
            prop_assert!(u.y.abs() <= tol);
        }
    }

    #[test]
    fn parallel_assembly_is_bit_identical(a in -0.3f64..0.3, b in -0.2f64..0.2) {
        let r = smooth_profile(24, 24, a, b);
        let quad = SurfaceQuadrature::for_grid(r.grid());
        let seq = OperatorField::assemble(&quad, &r, -0.3, false).unwrap();
        let par = OperatorField::assemble(&quad, &r, -0.3, true).unwrap();
        prop_assert_eq!(seq, par);
    }

    #[test]
    fn cfl_is_strict(max_a1 in 0.0f64..5.0) {
        let g = make_grid(100, 8, 0.01, 1.0).unwrap();
        let f = OperatorField::from_coefficients(vec![0.0, max_a1, -0.5 * max_a1, 0.0], vec![0.0; 4]);
        let rep = cfl_check(&f, &g);
        prop_assert_eq!(rep.ok, rep.courant < 1.0);
        prop_assert!((rep.courant - max_a1 * 0.01 / (PI / 100.0)).abs() <= 1e-14);
    }
}
