use antisurgery_core::handle::*;
use antisurgery_core::profile::StepProfile;
use antisurgery_core::symplectic::{find_double_points, transversality_gap, verify_lagrangian, DoublePointSearch};
use antisurgery_core::Error;
use proptest::prelude::*;

fn geom(n: usize, k: usize) -> HandleGeometry {
    build_handle(HandleParams::new(n, k, 0.1, 0.1).unwrap()).unwrap()
}

fn point(x0: f64, x: &[f64]) -> Vec<f64> {
    let mut p = vec![x0];
    p.extend_from_slice(x);
    p
}

#[test]
fn formula_examples() {
    let g = geom(2, 0);
    assert!((g.f(&[0.0, 1.2, 0.0]) - 0.44).abs() < 1e-14);
    assert!((g.f(&[1.0, 0.0, 0.0]) - 0.1).abs() < 1e-14);
    for x0 in [0.9, 0.95, 1.0, 1.4] {
        assert!(g.d_big_f(&[x0, 0.0, 0.0]).iter().all(|v| *v == 0.0));
    }
}

#[test]
fn profile_conditions() {
    for eps in [0.01, 0.05, 0.1, 0.2] {
        let p = HandleParams::new(3, 1, eps, 0.1).unwrap();
        assert_eq!(p.sigma(0.1).value, 0.0);
        assert_eq!(p.sigma(-0.4).value, 0.0);
        assert!((p.sigma(0.9).value - (1.0 + eps)).abs() < 1e-14);
        assert!((1..100).all(|i| p.sigma(0.1 + 0.8 * i as f64 / 100.0).d1 > 0.0));
        assert_eq!(p.rho(0.0).value, 1.0);
        assert_eq!(p.rho(1.0 + 2.0 * eps).value, 0.0);
        assert!(p.min_rho_slope() > -1.0 / (1.0 + eps));
    }
}

#[test]
fn violated_profile_names_the_condition() {
    let p = HandleParams::new(2, 0, 0.1, 0.1).unwrap();
    match p.with_profiles(StepProfile::Smootherstep, StepProfile::Smootherstep) {
        Err(Error::ProfileCondition { condition, .. }) => assert_eq!(condition, "rho' > -1/(1+eps)"),
        other => panic!("{other:?}"),
    }
    assert!(HandleParams::new(3, 3, 0.1, 0.1).is_err());
    assert!(HandleParams::new(3, 0, -0.1, 0.1).is_err());
}

#[test]
fn sheets_are_lagrangian() {
    for n in 1..=5usize {
        for k in 0..n {
            let g = geom(n, k);
            let grid = if n <= 3 { 12 } else { 6 };
            for s in [Sheet::Plus, Sheet::Minus] {
                let r = verify_lagrangian(&g.sheet(s), grid, 1e-8);
                assert!(r.passed && r.samples > 0, "n={n} k={k}: {r:?}");
            }
        }
    }
}

#[test]
fn lambda_contains_the_sphere_and_is_embedded() {
    let g = geom(3, 1);
    for t in [0.0f64, 1.0, 2.5, 4.0] {
        assert!(g.end_potential(0.0, &[t.cos(), t.sin(), 0.0]).abs() < 1e-14);
    }
    let m = end_model(&g, End::Lambda);
    let s = DoublePointSearch { grid: 16, ..Default::default() };
    assert!(find_double_points(&m.plus, &m.minus, &s).unwrap().is_empty());
    let m = end_model(&geom(2, 0), End::Lambda);
    let s = DoublePointSearch { grid: 40, ..Default::default() };
    assert!(find_double_points(&m.plus, &m.minus, &s).unwrap().is_empty());
}

#[test]
fn lambda_prime_slice_formula() {
    let eps = 0.1f64;
    let g = geom(3, 1);
    for i in -9..=9 {
        let xn = eps.sqrt() * i as f64 / 10.0;
        let y = g.d_big_f(&[1.0, 0.0, 0.0, xn]);
        let expected = -3.0 * (eps - xn * xn).sqrt() * xn;
        assert!((y[3] - expected).abs() < 1e-13, "{xn}");
        assert!(y[1].abs() < 1e-15 && y[2].abs() < 1e-15);
    }
    let m = end_model(&g, End::LambdaPrime);
    let s = DoublePointSearch { grid: 16, ..Default::default() };
    let pts = find_double_points(&m.plus, &m.minus, &s).unwrap();
    assert_eq!(pts.len(), 1);
    assert!(pts[0].point.to_flat().iter().all(|v| v.abs() < 1e-9));
}

#[test]
fn restricted_scans_are_empty() {
    let g = geom(3, 1);
    let s = DoublePointSearch { grid: 12, ..Default::default() };
    let early = LocusRegion { x0_max: 0.1, ..Default::default() };
    assert!(singular_locus(&g, &early, &s, 1e-4).unwrap().points.is_empty());
    let wide = LocusRegion { min_r2: 0.5, ..Default::default() };
    let l = singular_locus(&g, &wide, &s, 1e-4).unwrap();
    assert!(l.points.is_empty() && l.unrefined.is_empty());
}

#[test]
fn locus_extent_is_reported() {
    let g = geom(2, 0);
    let s = DoublePointSearch { grid: 24, ..Default::default() };
    let l = singular_locus(&g, &LocusRegion::default(), &s, 1e-4).unwrap();
    let (lo, hi) = l.x0_extent.unwrap();
    assert!(lo >= 0.9 - 1e-4 && hi >= lo);
}

#[test]
fn double_point_frame_example() {
    let g = geom(2, 0);
    let (plus, minus) = g.double_point_frames();
    let c = 3.0 * 0.1f64.sqrt();
    assert!((plus.x()[(0, 0)] - 1.0).abs() < 1e-14 && (plus.x()[(1, 1)] - 1.0).abs() < 1e-14);
    assert!((plus.y()[(0, 0)] - c).abs() < 1e-12);
    assert!((plus.y()[(1, 1)] + c).abs() < 1e-12);
    assert!((minus.y()[(0, 0)] + c).abs() < 1e-12);
    for n in 1..=5 {
        for k in 0..n {
            let (a, b) = geom(n, k).double_point_frames();
            assert!(transversality_gap(&a, &b).unwrap() > 0.0);
        }
    }
}

#[test]
fn cylindricity_examples() {
    let eps = 0.1f64;
    let g = geom(2, 0);
    // r^2 = 1.3 > 1 + 2 eps
    for x0 in [0.2, 0.5, 0.8] {
        let p = [x0, 1.3f64.sqrt(), 0.3];
        assert_eq!(g.d_big_f(&p)[0], 0.0);
    }
    let bound = 6.0 * (2.0 * eps).sqrt() * (1.0 + 4.0 * eps);
    for x0 in [0.3, 0.5, 0.7] {
        for s in 0..40 {
            let x2 = 0.02 * s as f64;
            let p = [x0, 1.0, x2];
            if g.f(&p) <= 0.0 {
                continue;
            }
            assert!(x2 * x2 < 2.0 * eps);
            let y = g.d_big_f(&p);
            assert!(y[1] * y[1] + y[2] * y[2] < bound);
        }
    }
    for (n, k) in [(1, 0), (2, 1), (3, 2)] {
        let r = check_cylindricity(&geom(n, k), 16, 1e-9);
        assert!(r.passed, "{r:?}");
    }
}

#[test]
fn teardrop_examples() {
    for (eps, area) in [(0.04f64, 0.016), (0.01, 0.002)] {
        let g = build_handle(HandleParams::new(2, 0, eps, 0.1).unwrap()).unwrap();
        let c = teardrop_curve(&g, 20_000).unwrap();
        assert!((c.enclosed_area().unwrap() - area).abs() < 1e-6);
        assert!((c.reversed().enclosed_area().unwrap() + area).abs() < 1e-6);
    }
    assert!(teardrop_curve(&geom(3, 2), 100).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gradient_matches_finite_differences(
        x0 in -0.4..1.4f64,
        x in prop::collection::vec(-1.5..1.5f64, 3),
        k in 0usize..3,
    ) {
        let g = geom(3, k);
        let p = point(x0, &x);
        prop_assume!(g.f(&p) > 1e-2);
        let h = 1e-6;
        let d = g.d_big_f(&p);
        for i in 0..4 {
            let mut a = p.clone();
            let mut b = p.clone();
            a[i] += h;
            b[i] -= h;
            let fd = (g.big_f(&a) - g.big_f(&b)) / (2.0 * h);
            prop_assert!((fd - d[i]).abs() < 1e-6 * (1.0 + d[i].abs()), "{} {} {}", i, fd, d[i]);
        }
    }

    #[test]
    fn ends_are_cylindrical(eps in 0.02..0.2f64, x in prop::collection::vec(-1.5..1.5f64, 2)) {
        let g = build_handle(HandleParams::new(2, 0, eps, 0.1).unwrap()).unwrap();
        for (lo, hi) in [(-0.5, 0.95), (0.05, 1.5)] {
            prop_assert_eq!(g.f(&point(lo, &x)), g.f(&point(0.0, &x)));
            prop_assert_eq!(g.f(&point(hi, &x)), g.f(&point(1.0, &x)));
        }
    }
}
