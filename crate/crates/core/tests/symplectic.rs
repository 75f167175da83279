use std::f64::consts::PI;

use antisurgery_core::linalg::Mat;
use antisurgery_core::symplectic::*;
use antisurgery_core::Error;
use proptest::prelude::*;

#[test]
fn omega_examples() {
    let w = SymplecticForm::new(2);
    let e = |i: usize| {
        let mut v = vec![0.0; 4];
        v[i] = 1.0;
        v
    };
    assert_eq!(omega_eval(&w, &e(0), &e(2)).unwrap(), 1.0);
    assert_eq!(omega_eval(&w, &e(0), &e(1)).unwrap(), 0.0);
    assert_eq!(omega_eval(&w, &[1.0, 2.0, 0.0, 0.0], &[0.0, 0.0, 3.0, 4.0]).unwrap(), 11.0);
    assert!(omega_eval(&w, &[1.0; 3], &[1.0; 4]).is_err());
}

/// `F = Σ c_m x^m` over monomials of degree at most three in three variables.
fn poly_graph(terms: Vec<(f64, [u32; 3])>) -> LagrangianPatch {
    let grad = move |x: &[f64]| -> Vec<f64> {
        (0..3)
            .map(|i| {
                terms
                    .iter()
                    .filter(|(_, m)| m[i] > 0)
                    .map(|(c, m)| {
                        let mut v = c * m[i] as f64;
                        for j in 0..3 {
                            v *= x[j].powi(m[j] as i32 - (i == j) as i32);
                        }
                        v
                    })
                    .sum()
            })
            .collect()
    };
    LagrangianPatch::new("graph", ParamBox::cube(3, -1.5, 1.5).unwrap(), 3, move |x: &[f64]| {
        PhasePoint::new(x.to_vec(), grad(x)).unwrap()
    })
    .unwrap()
    .with_finite_differences(1e-5)
}

#[test]
fn graph_examples() {
    let zero = LagrangianPatch::new("zero", ParamBox::cube(3, -1.0, 1.0).unwrap(), 3, |x: &[f64]| {
        PhasePoint::new(x.to_vec(), vec![0.0; 3]).unwrap()
    })
    .unwrap();
    let r = verify_lagrangian(&zero, 5, 1e-12);
    assert!(r.passed && r.max_residual == 0.0);
    // F = x1^2 x2
    let r = verify_lagrangian(&poly_graph(vec![(1.0, [2, 1, 0])]), 8, 1e-10);
    assert!(r.passed, "{r:?}");
    // a non-closed form: y = (0, x1, 0)
    let twisted = LagrangianPatch::new("twisted", ParamBox::cube(2, -1.0, 1.0).unwrap(), 2, |x: &[f64]| {
        PhasePoint::new(x.to_vec(), vec![0.0, x[0]]).unwrap()
    })
    .unwrap();
    let r = verify_lagrangian(&twisted, 4, 1e-8);
    assert!(!r.passed && (r.max_residual - 1.0).abs() < 1e-6);
}

#[test]
fn rank_drop_is_an_immersion_failure() {
    let p = LagrangianPatch::new("fold", ParamBox::cube(2, -1.0, 1.0).unwrap(), 2, |u: &[f64]| {
        PhasePoint::new(vec![u[0], u[0]], vec![0.0, 0.0]).unwrap()
    })
    .unwrap();
    let r = verify_lagrangian(&p, 4, 1e-8);
    assert!(r.is_immersion_failure());
    assert!(!r.passed);
}

#[test]
fn transversality_examples() {
    let h = LagrangianFrame::horizontal(3);
    let v = LagrangianFrame::vertical(3);
    assert!((transversality_gap(&h, &v).unwrap() - 1.0).abs() < 1e-12);
    assert!(transversality_gap(&h, &h).unwrap() < 1e-12);
    assert!(transversality_gap(&h, &LagrangianFrame::horizontal(2)).is_err());
}

fn half_turn(samples: usize) -> FrameLoop {
    FrameLoop::sample(0.0, PI, samples, |t| Ok(LagrangianFrame::line(t))).unwrap()
}

fn constant(n: usize, samples: usize) -> FrameLoop {
    FrameLoop::sample(0.0, 1.0, samples, |_| Ok(LagrangianFrame::horizontal(n))).unwrap()
}

#[test]
fn maslov_examples() {
    assert_eq!(maslov_index(&constant(3, 10)).unwrap(), 0);
    assert_eq!(maslov_index(&half_turn(64)).unwrap(), 1);
    let product = half_turn(64).direct_sum(&constant(2, 64)).unwrap();
    assert_eq!(maslov_index(&product).unwrap(), 1);
    assert_eq!(maslov_index(&half_turn(64).reversed()).unwrap(), -1);
    // det^2 jumps by a quarter turn per step or more
    assert!(matches!(maslov_index(&half_turn(2)), Err(Error::RefinementNeeded { .. })));
}

#[test]
fn open_frame_loops_are_rejected() {
    let r = FrameLoop::sample(0.0, PI / 2.0, 10, |t| Ok(LagrangianFrame::line(t)));
    assert!(r.is_err());
}

#[test]
fn area_examples() {
    let c = PlanarCurve::sample_closed(10_000, 2.0 * PI, |t| [t.cos(), t.sin()]).unwrap();
    assert!((c.enclosed_area().unwrap() - PI).abs() / PI < 1e-6);
    assert!((c.reversed().enclosed_area().unwrap() + PI).abs() / PI < 1e-6);
    // one lobe: y = 3 sqrt(eps - x^2) x out along the top, its reflection back
    let eps = 0.04f64;
    let r = eps.sqrt();
    let t = PlanarCurve::sample_closed(20_000, 2.0 * PI, |s| {
        let x = r * (s / 2.0).sin();
        let y = 3.0 * (eps - x * x).max(0.0).sqrt() * x;
        [x, if s < PI { y } else { -y }]
    })
    .unwrap();
    assert!((t.enclosed_area().unwrap().abs() - 0.016).abs() < 1e-6);
    assert!(PlanarCurve::open(vec![[0.0, 0.0], [1.0, 0.0]]).enclosed_area().is_err());
}

fn plane(n: usize, vertical: bool, offset: f64) -> LagrangianPatch {
    LagrangianPatch::new("plane", ParamBox::cube(n, -1.0, 1.0).unwrap(), n, move |u: &[f64]| {
        if vertical {
            PhasePoint::new(vec![offset; u.len()], u.to_vec()).unwrap()
        } else {
            PhasePoint::new(u.to_vec(), vec![offset; u.len()]).unwrap()
        }
    })
    .unwrap()
}

#[test]
fn double_point_examples() {
    let s = DoublePointSearch { grid: 9, ..Default::default() };
    let pts = find_double_points(&plane(2, false, 0.0), &plane(2, true, 0.0), &s).unwrap();
    assert_eq!(pts.len(), 1);
    assert!(pts[0].point.to_flat().iter().all(|v| v.abs() < 1e-10));
    assert!(find_double_points(&plane(2, false, 0.0), &plane(2, false, 0.3), &s).unwrap().is_empty());
}

proptest! {
    #[test]
    fn omega_is_antisymmetric(u in prop::collection::vec(-10.0..10.0f64, 6), v in prop::collection::vec(-10.0..10.0f64, 6)) {
        let w = SymplecticForm::new(3);
        prop_assert!((omega_eval(&w, &u, &v).unwrap() + omega_eval(&w, &v, &u).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn exact_graphs_are_lagrangian(terms in prop::collection::vec((-1.0..1.0f64, [0u32..=3, 0u32..=3, 0u32..=3]), 1..6)) {
        let terms: Vec<_> = terms.into_iter().filter(|(_, m)| m.iter().sum::<u32>() <= 3).collect();
        let r = verify_lagrangian(&poly_graph(terms), 6, 1e-8);
        prop_assert!(r.passed, "{:?}", r);
    }

    #[test]
    fn maslov_is_additive_and_refinement_invariant(p in -3i64..=3, q in -3i64..=3, m in 1usize..4) {
        let samples = 48 * m;
        let turn = |k: i64| FrameLoop::sample(0.0, PI * k as f64, samples, |t| Ok(LagrangianFrame::line(t))).unwrap();
        let (a, b) = (turn(p), turn(q));
        prop_assert_eq!(maslov_index(&a).unwrap(), p);
        prop_assert_eq!(maslov_index(&a.direct_sum(&b).unwrap()).unwrap(), p + q);
        prop_assert_eq!(maslov_index(&a.reversed()).unwrap(), -p);
    }

    #[test]
    fn rotated_frames_keep_the_index(theta in 0.0..PI, samples in 40usize..200) {
        // constant rotation U = e^{iθ} on all frames adds nothing to the winding
        let r = Mat::from_fn(2, 2, |i, j| if i == j { theta.cos() } else { 0.0 });
        let s = Mat::from_fn(2, 2, |i, j| if i == j { theta.sin() } else { 0.0 });
        let lp = FrameLoop::sample(0.0, 2.0 * PI, samples, |t| {
            let base = LagrangianFrame::line(t).direct_sum(&LagrangianFrame::line(0.0));
            let (rx, sy) = (r.matmul(base.x()), s.matmul(base.y()));
            let (sx, ry) = (s.matmul(base.x()), r.matmul(base.y()));
            LagrangianFrame::new(
                Mat::from_fn(2, 2, |i, j| rx[(i, j)] - sy[(i, j)]),
                Mat::from_fn(2, 2, |i, j| sx[(i, j)] + ry[(i, j)]),
            )
        })
        .unwrap();
        prop_assert_eq!(maslov_index(&lp).unwrap(), 2);
    }

    #[test]
    fn area_converges_quadratically(a in 0.5..2.0f64, b in 0.5..2.0f64) {
        let err = |m: usize| {
            let c = PlanarCurve::sample_closed(m, 2.0 * PI, |t| [a * t.cos(), b * t.sin()]).unwrap();
            (c.enclosed_area().unwrap() - PI * a * b).abs()
        };
        let ratio = err(200) / err(400);
        prop_assert!(ratio > 3.5 && ratio < 4.5, "{}", ratio);
    }

    #[test]
    fn double_points_are_symmetric(c in 0.1..0.9f64, slope in -1.0..1.0f64) {
        let a = LagrangianPatch::new("a", ParamBox::cube(1, -2.0, 2.0).unwrap(), 1, move |u: &[f64]| {
            PhasePoint::new(vec![u[0]], vec![u[0] * u[0] - c]).unwrap()
        }).unwrap();
        let b = LagrangianPatch::new("b", ParamBox::cube(1, -2.0, 2.0).unwrap(), 1, move |u: &[f64]| {
            PhasePoint::new(vec![u[0]], vec![slope * u[0]]).unwrap()
        }).unwrap();
        let s = DoublePointSearch { grid: 60, ..Default::default() };
        let ab = find_double_points(&a, &b, &s).unwrap();
        let ba = find_double_points(&b, &a, &s).unwrap();
        prop_assert_eq!(ab.len(), ba.len());
        prop_assert_eq!(ab.len(), 2);
        for p in &ab {
            let q = ba.iter().find(|q| q.point.distance(&p.point) < 1e-8).expect("matching point");
            prop_assert!((p.param_a[0] - q.param_b[0]).abs() < 1e-8);
        }
    }
}
