use antisurgery_core::handle::{build_handle, end_model, End, HandleParams};
use antisurgery_core::linalg::Mat;
use antisurgery_core::symplectic::{LagrangianFrame, find_double_points, verify_lagrangian, DoublePointSearch, LagrangianPatch};
use antisurgery_core::zero_surgery::*;
use proptest::prelude::*;

fn params(n: usize, k: usize) -> HandleParams {
    HandleParams::new(n, k, 0.1, 0.1).unwrap()
}

fn resolved(n: usize, k: usize, sign: Resolution) -> (antisurgery_core::handle::EndModel, ResolvedEnd) {
    let g = build_handle(params(n, k)).unwrap();
    let end = end_model(&g, End::LambdaPrime);
    let r = resolve_double_point(&end, &ResolutionChoice::default_for(g.params(), sign)).unwrap();
    (end, r)
}

fn expected(n: usize, k: usize, sign: Resolution) -> i64 {
    match sign {
        Resolution::Minus => 1 - k as i64,
        Resolution::Plus => (n - k - 1) as i64,
    }
}

#[test]
fn maslov_indices_of_both_resolutions() {
    for n in 2..=6 {
        for k in 0..=n - 2 {
            for sign in [Resolution::Minus, Resolution::Plus] {
                let p = params(n, k);
                let m = maslov_of_resolution(&p, &ResolutionChoice::default_for(&p, sign)).unwrap();
                assert_eq!(m.mu, expected(n, k, sign), "n={n} k={k} {sign:?}");
                assert_eq!(m.per_factor.iter().sum::<i64>(), m.raw_winding);
                assert!(m.frames >= 256);
                if sign == Resolution::Plus {
                    assert_eq!(m.raw_winding % 2, 0);
                }
            }
        }
    }
}

#[test]
fn top_index_is_rejected() {
    let p = params(3, 2);
    assert!(maslov_of_resolution(&p, &ResolutionChoice::default_for(&p, Resolution::Plus)).is_err());
}

#[test]
fn slice_shapes() {
    let (_, minus) = resolved(3, 1, Resolution::Minus);
    assert_eq!(minus.slices.len(), 2);
    assert!(minus.slices.iter().all(|c| c.self_crossings().is_empty()));
    assert!(minus.slices[0].crossings_with(&minus.slices[1]).is_empty());
    let (_, plus) = resolved(3, 1, Resolution::Plus);
    assert_eq!(plus.slices.len(), 1);
    assert!(plus.slices[0].self_crossings().is_empty());
    // both lobes enclose the same area, so the joined curve has twice the class area
    let a = plus.area.unwrap();
    assert!((a.curve_areas[0] - 2.0 * a.class_area).abs() < 1e-15);
}

#[test]
fn area_adjustment_vanishes_with_kappa() {
    let g = build_handle(params(3, 1)).unwrap();
    let end = end_model(&g, End::LambdaPrime);
    for sign in [Resolution::Minus, Resolution::Plus] {
        let mut last = f64::INFINITY;
        for kappa in [0.04, 0.02, 0.01, 0.005] {
            let r = resolve_double_point(&end, &ResolutionChoice { sign, kappa }).unwrap();
            let a = r.area.unwrap();
            assert!(a.alpha.abs() < last);
            assert!(a.alpha.abs() < a.teardrop);
            last = a.alpha.abs();
        }
        assert!(last < 5e-3);
    }
}

#[test]
fn oversized_kappa_is_rejected() {
    let g = build_handle(params(3, 1)).unwrap();
    let end = end_model(&g, End::LambdaPrime);
    let choice = ResolutionChoice { sign: Resolution::Plus, kappa: 0.2 };
    assert!(resolve_double_point(&end, &choice).is_err());
    let lam = end_model(&g, End::Lambda);
    assert!(resolve_double_point(&lam, &ResolutionChoice { kappa: 0.02, ..choice }).is_err());
}

#[test]
fn resolved_patches_are_lagrangian() {
    for (n, k) in [(2, 0), (3, 1)] {
        for sign in [Resolution::Minus, Resolution::Plus] {
            let (_, r) = resolved(n, k, sign);
            for p in r.patches() {
                let rep = verify_lagrangian(p, 10, 1e-8);
                assert!(rep.passed, "{rep:?}");
            }
            // the gluing band where the potential is interpolated
            let band = LagrangianPatch::clone(&r.plus);
            let rep = verify_lagrangian(&restrict_near_origin(&band, 1.5 * r.r_outer), 8, 1e-8);
            assert!(rep.passed && rep.samples > 0, "{rep:?}");
        }
    }
}

fn restrict_near_origin(p: &LagrangianPatch, half: f64) -> LagrangianPatch {
    use antisurgery_core::symplectic::ParamBox;
    let n = p.dim();
    let (q1, q2, q3) = (p.clone(), p.clone(), p.clone());
    LagrangianPatch::new("band", ParamBox::cube(n, -half, half).unwrap(), p.ambient_dim(), move |u: &[f64]| q1.eval(u))
        .unwrap()
        .with_jacobian(move |u: &[f64]| q2.jacobian(u))
        .with_predicate(move |u: &[f64]| q3.contains(u))
}

#[test]
fn resolution_is_embedded() {
    for (n, k, grid) in [(2, 0, 24), (3, 1, 10)] {
        for sign in [Resolution::Minus, Resolution::Plus] {
            let (_, r) = resolved(n, k, sign);
            let s = DoublePointSearch { grid, ..Default::default() };
            let near = |p: &LagrangianPatch| restrict_near_origin(p, 3.0 * r.r_outer);
            let pairs = [
                (near(&r.plus), near(&r.minus)),
                (r.plus.clone(), r.minus.clone()),
                (r.core.clone(), near(&r.plus)),
                (r.core.clone(), near(&r.minus)),
            ];
            for (a, b) in &pairs {
                let pts = find_double_points(a, b, &s).unwrap();
                assert!(pts.is_empty(), "n={n} {sign:?} {} x {}: {pts:?}", a.label(), b.label());
            }
        }
    }
}

fn hausdorff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let d = |p: &Vec<f64>, q: &Vec<f64>| p.iter().zip(q).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    let one = |a: &[Vec<f64>], b: &[Vec<f64>]| {
        a.iter()
            .map(|p| b.iter().map(|q| d(p, q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one(a, b).max(one(b, a))
}

#[test]
fn unchanged_outside_the_gluing_ball() {
    for sign in [Resolution::Minus, Resolution::Plus] {
        let (end, r) = resolved(2, 0, sign);
        let kappa = r.choice.kappa;
        assert!(r.support_radius < 2.0 * kappa);
        let m = 61;
        let span = 6.0 * kappa;
        let mut before = Vec::new();
        let mut after = Vec::new();
        for i in 0..m {
            for j in 0..m {
                let x = [-span + 2.0 * span * i as f64 / (m - 1) as f64, -span + 2.0 * span * j as f64 / (m - 1) as f64];
                for (old, new) in [(&end.plus, &r.plus), (&end.minus, &r.minus)] {
                    let far = |p: &Vec<f64>| p.iter().map(|v| v * v).sum::<f64>().sqrt() >= 2.0 * kappa;
                    if old.contains(&x) {
                        let p = old.eval_flat(&x);
                        if far(&p) {
                            before.push(p);
                        }
                    }
                    if new.contains(&x) {
                        let p = new.eval_flat(&x);
                        if far(&p) {
                            after.push(p);
                        }
                    }
                }
            }
        }
        assert!(!before.is_empty());
        assert_eq!(before.len(), after.len());
        assert!(hausdorff(&before, &after) < 1e-9);
    }
}

#[test]
fn model_is_the_rotation_orbit_of_the_curve() {
    let c = SurgeryCurve::new(0.1).unwrap();
    let patch = surgery_model(&c, 2, 0.3).unwrap();
    let profile = c.sample(0.3, 20001);
    // every model point, rotated back into T*R_1, lies on γ
    for u in patch.samples(30) {
        let p = patch.eval(&u);
        let (x, y) = (p.x(), p.y());
        assert!((x[0] * y[1] - x[1] * y[0]).abs() < 1e-14);
        let q = [-(x[0].hypot(x[1])), y[0].hypot(y[1])];
        let d = profile
            .points()
            .windows(2)
            .map(|w| seg_dist(q, w[0], w[1]))
            .fold(f64::INFINITY, f64::min);
        assert!(d < 1e-6, "{q:?} off the curve by {d}");
    }
    // every rotated curve point is a model point
    for i in 0..200 {
        let t = -0.3 + 0.6 * i as f64 / 199.0;
        let phi = 0.7 + 5.0 * i as f64 / 199.0;
        let [a, b] = c.point(t);
        let rotated = [a * phi.cos(), a * phi.sin(), b * phi.cos(), b * phi.sin()];
        let p = patch.eval_flat(&[t, phi]);
        assert!(p.iter().zip(&rotated).all(|(x, y)| (x - y).abs() < 1e-12));
    }
}

fn seg_dist(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let l2 = ab[0] * ab[0] + ab[1] * ab[1];
    let s = if l2 == 0.0 { 0.0 } else { (((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1]) / l2).clamp(0.0, 1.0) };
    (p[0] - a[0] - s * ab[0]).hypot(p[1] - a[1] - s * ab[1])
}

#[test]
fn desingularized_slice() {
    for n in [1, 2] {
        let c = 3.0 * 0.1f64.sqrt();
        let y = Mat::from_fn(n, n, |i, j| if i != j { 0.0 } else if i == 0 { c } else { -c });
        let plus = LagrangianFrame::new(Mat::identity(n), y.clone()).unwrap();
        let minus = LagrangianFrame::new(Mat::identity(n), y.scale(-1.0)).unwrap();
        let c = SurgeryCurve::new(0.025).unwrap();
        let s = DoublePointSearch { grid: 12, ..Default::default() };
        let rep = desingularization_model(&EtaPair, &plus, &minus, &c, &s).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert!(rep.x_extent.0 > -1e-9 && rep.x_extent.1 > 0.5);
        assert_eq!(rep.w_crossings, 1);
        assert_eq!(rep.sharp_crossings, 0);
        assert!(rep.splice_hausdorff < 1e-12);
    }
}

#[test]
fn eta_curves_meet_on_the_half_line() {
    let e = EtaPair;
    let (p, m) = e.curves(-1.0, 1.0, 201);
    for (a, b) in p.points().iter().zip(m.points()) {
        if a[0] >= 0.0 {
            assert_eq!(a, b);
        } else {
            assert!(a[1] > 0.0 && b[1] < 0.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn maslov_independent_of_kappa(kappa in 0.002f64..0.06, plus in any::<bool>(), k in 0usize..=2) {
        let p = params(4, k);
        let sign = if plus { Resolution::Plus } else { Resolution::Minus };
        let m = maslov_of_resolution(&p, &ResolutionChoice { sign, kappa }).unwrap();
        prop_assert_eq!(m.mu, expected(4, k, sign));
    }
}
