//! Worked families: Lagrangians in `C^2` obtained by rotating a planar
//! profile, the figure-eight profile and its two resolutions, and the
//! `CP^n` family `L_r` in the chart `D^n(1) x D^n(π/2)`.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::calculus::{antisurgery, ManifoldDescriptor, SumFactor};
use crate::handle::{HandleGeometry, F_MIN};
use crate::linalg::{math, norm, Mat};
use crate::rational::Ratio;
use crate::symplectic::{segment_intersection, ClosedSpline, LagrangianPatch, ParamBox, PhasePoint, PlanarCurve};
use crate::zero_surgery::sphere_point;
use crate::{Error, Result};

/// `L_γ = {(γ(s) e^{it}, γ(s) e^{-it})} ⊂ C^2 = T*R^2`, with `z_j = x_j + i y_j`.
#[derive(Debug, Clone)]
pub struct RotationLagrangian {
    pub profile: ClosedSpline,
    pub curve: PlanarCurve,
    /// Half the area bounded by the profile.
    pub area_param: f64,
    pub patch: LagrangianPatch,
}

/// Splines are resampled at this many points at least.
pub const PROFILE_SAMPLES: usize = 512;

pub fn build_rotation_lagrangian(gamma: &PlanarCurve) -> Result<RotationLagrangian> {
    if !gamma.is_closed() {
        return Err(Error::OpenCurve);
    }
    if !(gamma.length() > 1e-12) {
        return Err(Error::Degenerate("profile curve has zero length".into()));
    }
    let mut knots = gamma.points().to_vec();
    knots.pop();
    let profile = ClosedSpline::new(knots)?;
    let m = PROFILE_SAMPLES.max(profile.knots().len());
    let curve = PlanarCurve::sample_closed(m, 2.0 * PI, |s| profile.eval(s).0)?;
    let area_param = bounded_area(&curve)? / 2.0;
    let (p1, p2) = (profile.clone(), profile.clone());
    let patch = LagrangianPatch::new("L_gamma", ParamBox::cube(2, 0.0, 2.0 * PI)?, 2, move |u: &[f64]| {
        let (z, _) = p1.eval(u[0]);
        let (c, s) = (math::cos(u[1]), math::sin(u[1]));
        // z e^{it} and z e^{-it}
        let z1 = [z[0] * c - z[1] * s, z[0] * s + z[1] * c];
        let z2 = [z[0] * c + z[1] * s, -z[0] * s + z[1] * c];
        PhasePoint::new(alloc::vec![z1[0], z2[0]], alloc::vec![z1[1], z2[1]]).expect("two coordinates")
    })?
    .with_jacobian(move |u: &[f64]| {
        let (z, dz) = p2.eval(u[0]);
        let (c, s) = (math::cos(u[1]), math::sin(u[1]));
        let rot = |w: [f64; 2], sign: f64| [w[0] * c - sign * w[1] * s, sign * w[0] * s + w[1] * c];
        let ds1 = rot(dz, 1.0);
        let ds2 = rot(dz, -1.0);
        let z1 = rot(z, 1.0);
        let z2 = rot(z, -1.0);
        // d/dt: i z1 and -i z2
        let dt1 = [-z1[1], z1[0]];
        let dt2 = [z2[1], -z2[0]];
        Mat::from_columns(4, &[
            alloc::vec![ds1[0], ds2[0], ds1[1], ds2[1]],
            alloc::vec![dt1[0], dt2[0], dt1[1], dt2[1]],
        ])
    });
    Ok(RotationLagrangian {
        profile,
        curve,
        area_param,
        patch,
    })
}

/// Transverse crossings of a closed polyline, as `(segment i, segment j, point)`.
fn crossings(curve: &PlanarCurve) -> Vec<(usize, usize, [f64; 2])> {
    let p = curve.points();
    let m = p.len() - 1;
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 2..m {
            if i == 0 && j == m - 1 {
                continue;
            }
            if let Some(x) = segment_intersection(p[i], p[i + 1], p[j], p[j + 1]) {
                out.push((i, j, x));
            }
        }
    }
    out
}

/// Total area bounded by a closed curve with at most one self-crossing:
/// the two loops of a figure eight are counted with their absolute areas.
pub fn bounded_area(curve: &PlanarCurve) -> Result<f64> {
    let c = crossings(curve);
    match c.as_slice() {
        [] => Ok(math::abs(curve.enclosed_area()?)),
        [(i, j, x)] => {
            let p = curve.points();
            let mut inner = alloc::vec![*x];
            inner.extend_from_slice(&p[i + 1..=*j]);
            let mut outer = alloc::vec![*x];
            outer.extend_from_slice(&p[j + 1..]);
            outer.extend_from_slice(&p[1..=*i]);
            let a = PlanarCurve::closed(inner)?.enclosed_area()?;
            let b = PlanarCurve::closed(outer)?.enclosed_area()?;
            Ok(math::abs(a) + math::abs(b))
        }
        _ => Err(Error::NotRepresentable(alloc::format!(
            "bounded area of a curve with {} self-crossings",
            c.len()
        ))),
    }
}

/// Points of `C^2` where `L_γ` fails to be embedded. For a profile
/// symmetric under `z -> -z` the parametrization covers `L_γ` twice and
/// the antipodal identification is not counted.
pub fn rotation_double_points(curves: &[PlanarCurve]) -> Vec<[f64; 4]> {
    let lift = |z: [f64; 2]| [z[0], z[0], z[1], -z[1]];
    let mut out: Vec<[f64; 4]> = Vec::new();
    let mut push = |p: [f64; 4]| {
        if !out.iter().any(|q| q.iter().zip(&p).all(|(a, b)| math::abs(a - b) < 1e-9)) {
            out.push(p);
        }
    };
    let origin_hit = curves.iter().any(|c| {
        c.points()
            .windows(2)
            .any(|w| segment_distance([0.0, 0.0], w[0], w[1]) < 1e-9)
    });
    if origin_hit {
        push([0.0; 4]);
    }
    for (a, ca) in curves.iter().enumerate() {
        for (_, _, x) in crossings(ca) {
            if math::hypot(x[0], x[1]) > 1e-9 {
                push(lift(x));
            }
        }
        for cb in &curves[a + 1..] {
            for x in ca.crossings_with(cb) {
                push(lift(x));
            }
        }
        let neg = ca.map(|p| [-p[0], -p[1]]);
        if !is_origin_symmetric(ca) {
            for (b, cb) in curves.iter().enumerate() {
                // -γ_a meets γ_b in a transverse point, unless γ_b = -γ_a
                if b != a && same_point_set(&neg, cb) {
                    continue;
                }
                for x in neg.crossings_with(cb) {
                    push(lift(x));
                }
            }
        }
    }
    out
}

fn segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let l2 = ab[0] * ab[0] + ab[1] * ab[1];
    let s = if l2 == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1]) / l2).clamp(0.0, 1.0)
    };
    math::hypot(p[0] - a[0] - s * ab[0], p[1] - a[1] - s * ab[1])
}

fn same_point_set(a: &PlanarCurve, b: &PlanarCurve) -> bool {
    crate::symplectic::polyline_hausdorff(a, b) < 1e-6 * (1.0 + a.length())
}

fn is_origin_symmetric(c: &PlanarCurve) -> bool {
    same_point_set(c, &c.map(|p| [-p[0], -p[1]]))
}

/// The three profiles of the rotation construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ProfileKind {
    /// Figure eight through the origin.
    Whitney,
    /// One curve around the origin.
    Clifford,
    /// Two curves exchanged by `z -> -z`, neither around the origin.
    Chekanov,
}

#[derive(Debug, Clone)]
pub struct ProfileSet {
    pub kind: ProfileKind,
    pub curves: Vec<PlanarCurve>,
    /// Half the total area bounded by the curves.
    pub area_param: f64,
}

impl ProfileSet {
    pub fn winding_pattern(&self) -> Result<Vec<i64>> {
        self.curves.iter().map(|c| c.winding_number([0.0, 0.0])).collect()
    }
}

/// The Cassini curves `|z^2 - a^2| = b^2`: a lemniscate for `b = a`, one
/// oval around the origin for `b > a`, two ovals for `b < a`. All are
/// counterclockwise.
pub fn cassini_profile(a: f64, b: f64, samples: usize) -> Result<ProfileSet> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidParameter {
            name: "cassini",
            reason: "need a, b > 0".into(),
        });
    }
    let m = samples.max(PROFILE_SAMPLES);
    let csqrt = |w: [f64; 2]| {
        let r = math::sqrt(math::hypot(w[0], w[1]));
        let th = math::atan2(w[1], w[0]) / 2.0;
        [r * math::cos(th), r * math::sin(th)]
    };
    let mul = |p: [f64; 2], q: [f64; 2]| [p[0] * q[0] - p[1] * q[1], p[0] * q[1] + p[1] * q[0]];
    let (kind, curves) = if (b - a).abs() <= 1e-15 * a {
        // Bernoulli lemniscate with c^2 = 2 a^2; the offset keeps the origin off the vertices
        let c = a * core::f64::consts::SQRT_2;
        let curve = PlanarCurve::closed(
            (0..m)
                .map(|i| {
                    let t = 2.0 * PI * (i as f64 + 0.5) / m as f64;
                    let d = 1.0 + math::sin(t) * math::sin(t);
                    [c * math::cos(t) / d, c * math::sin(t) * math::cos(t) / d]
                })
                .collect(),
        )?;
        (ProfileKind::Whitney, alloc::vec![curve])
    } else if b > a {
        // z = b e^{iφ/2} sqrt(1 + (a/b)^2 e^{-iφ}), φ ∈ [0, 4π)
        let q = (a / b) * (a / b);
        let curve = PlanarCurve::sample_closed(m, 2.0 * PI, |s| {
            let phi = 2.0 * s;
            let w = csqrt([1.0 + q * math::cos(phi), -q * math::sin(phi)]);
            let e = [b * math::cos(s), b * math::sin(s)];
            mul(e, w)
        })?;
        (ProfileKind::Clifford, alloc::vec![curve])
    } else {
        // z = ±a sqrt(1 + (b/a)^2 e^{iφ})
        let q = (b / a) * (b / a);
        let right = PlanarCurve::sample_closed(m, 2.0 * PI, |phi| {
            let w = csqrt([1.0 + q * math::cos(phi), q * math::sin(phi)]);
            [a * w[0], a * w[1]]
        })?;
        let left = right.map(|p| [-p[0], -p[1]]);
        (ProfileKind::Chekanov, alloc::vec![right, left])
    };
    let area_param = curves.iter().map(bounded_area).sum::<Result<f64>>()? / 2.0;
    Ok(ProfileSet {
        kind,
        curves,
        area_param,
    })
}

/// The figure eight with parameter `a` and its two resolutions, obtained by
/// moving the Cassini parameter to `a (1 ± spread)`.
pub fn figure_eight_family(a: f64, spread: f64, samples: usize) -> Result<[ProfileSet; 3]> {
    if !(spread > 0.0 && spread < 1.0) {
        return Err(Error::InvalidParameter {
            name: "spread",
            reason: "need 0 < spread < 1".into(),
        });
    }
    Ok([
        cassini_profile(a, a, samples)?,
        cassini_profile(a, a * (1.0 + spread), samples)?,
        cassini_profile(a, a * (1.0 - spread), samples)?,
    ])
}

/// Tori reachable from a Whitney sphere of area `A` by 0-surgery.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AreaPlan {
    pub whitney: f64,
    pub target: ProfileKind,
    pub target_area: f64,
    pub feasible: bool,
}

/// Clifford tori of area `A' > A` and Chekanov tori of area `A'' < A` arise
/// from the Whitney sphere of area `A`.
pub fn torus_area_plan(whitney: f64, target: ProfileKind, target_area: f64) -> Result<AreaPlan> {
    if !(whitney > 0.0 && target_area > 0.0) {
        return Err(Error::InvalidParameter {
            name: "area",
            reason: "areas must be positive".into(),
        });
    }
    let feasible = match target {
        ProfileKind::Clifford => target_area > whitney,
        ProfileKind::Chekanov => target_area < whitney,
        ProfileKind::Whitney => target_area == whitney,
    };
    Ok(AreaPlan {
        whitney,
        target,
        target_area,
        feasible,
    })
}

/// A cobordism between tori in `C^2`, built on `[0,1] x T^2` by attaching
/// a 2-handle and then a 1-handle.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TorusCobordism {
    pub from: (ProfileKind, f64),
    pub to: (ProfileKind, f64),
    /// An intermediate Whitney area `A'' < A < A'`.
    pub whitney: f64,
    pub handles: Vec<(usize, usize)>,
}

/// The cobordism `T(A'') ~> T(A')` if it is among those provided by the
/// construction: Chekanov to Clifford, Clifford to Clifford, Chekanov to
/// Chekanov, always with `A'' < A'`.
pub fn torus_cobordism(from: (ProfileKind, f64), to: (ProfileKind, f64)) -> Option<TorusCobordism> {
    use ProfileKind::*;
    let allowed = matches!((from.0, to.0), (Chekanov, Clifford) | (Clifford, Clifford) | (Chekanov, Chekanov));
    if !allowed || !(from.1 > 0.0 && from.1 < to.1) {
        return None;
    }
    Some(TorusCobordism {
        from,
        to,
        whitney: 0.5 * (from.1 + to.1),
        handles: alloc::vec![(2, 1), (1, 1)],
    })
}

/// `L_r` near the fibre over `p = [0:...:0:1]`: the conormal bundle of the
/// sphere of radius `r` in `D^n(1) x D^n(π/2)`, covectors shorter than `π/2`.
#[derive(Debug, Clone)]
pub struct CPnChartModel {
    pub n: usize,
    pub r: f64,
    pub conormal: LagrangianPatch,
}

/// Keeps the open conditions `|covector| < π/2` and the sphere poles strict.
const CHART_MARGIN: f64 = 1e-6;

pub fn build_cpn_model(n: usize, r: f64) -> Result<CPnChartModel> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidParameter {
            name: "r",
            reason: "the fibre sphere radius must lie in (0, 1)".into(),
        });
    }
    if n < 2 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "need n >= 2".into(),
        });
    }
    let mut lo = alloc::vec![-FRAC_PI_2 + CHART_MARGIN];
    let mut hi = alloc::vec![FRAC_PI_2 - CHART_MARGIN];
    for j in 0..n - 1 {
        if j + 1 < n - 1 {
            lo.push(1e-3);
            hi.push(PI - 1e-3);
        } else {
            lo.push(0.0);
            hi.push(2.0 * PI);
        }
    }
    let conormal = LagrangianPatch::new("N*S(r)", ParamBox::new(lo, hi)?, n, move |u: &[f64]| {
        let (w, _) = sphere_point(&u[1..]);
        PhasePoint::new(w.iter().map(|v| r * v).collect(), w.iter().map(|v| u[0] * v).collect())
            .expect("matching lengths")
    })?
    .with_jacobian(move |u: &[f64]| {
        let (w, dw) = sphere_point(&u[1..]);
        let mut j = Mat::zeros(2 * n, n);
        for i in 0..n {
            j[(n + i, 0)] = w[i];
            for k in 0..n - 1 {
                j[(i, k + 1)] = r * dw[(i, k)];
                j[(n + i, k + 1)] = u[0] * dw[(i, k)];
            }
        }
        j
    });
    Ok(CPnChartModel { n, r, conormal })
}

impl CPnChartModel {
    /// `[x_1 : ... : x_{n+1}] -> arcsin(ρ) v / ρ`, where `v = (x_1..x_n)` and
    /// `ρ = |v|` for the representative with `|x| = 1`, `x_{n+1} > 0`.
    pub fn chart_map(&self, x: &[f64]) -> Result<Vec<f64>> {
        chart_map(self.n, x)
    }

    pub fn chart_inverse(&self, w: &[f64]) -> Result<Vec<f64>> {
        chart_inverse(self.n, w)
    }
}

pub fn chart_map(n: usize, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != n + 1 {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            got: x.len(),
        });
    }
    let len = norm(x);
    if !(math::abs(x[n]) > 1e-15 * len) {
        return Err(Error::OutOfRange("the point lies on the hyperplane at infinity".into()));
    }
    let s = if x[n] > 0.0 { 1.0 / len } else { -1.0 / len };
    let v: Vec<f64> = x[..n].iter().map(|c| s * c).collect();
    let rho = norm(&v);
    if rho == 0.0 {
        return Ok(v);
    }
    let scale = math::asin(rho.min(1.0)) / rho;
    Ok(v.into_iter().map(|c| c * scale).collect())
}

/// The normalized representative of the point with chart coordinates `w`, `|w| < π/2`.
pub fn chart_inverse(n: usize, w: &[f64]) -> Result<Vec<f64>> {
    if w.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: w.len() });
    }
    let th = norm(w);
    if th >= FRAC_PI_2 {
        return Err(Error::OutOfRange("chart coordinates must lie in the open disc of radius pi/2".into()));
    }
    let scale = if th == 0.0 { 1.0 } else { math::sin(th) / th };
    let mut x: Vec<f64> = w.iter().map(|c| c * scale).collect();
    x.push(math::cos(th));
    Ok(x)
}

/// Areas in units of `π`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MonotonicityBudget {
    pub n: usize,
    pub k: usize,
    /// `2 / (n+1)`.
    pub eta_ambient: Ratio,
    /// `1 / (n+1)`.
    pub eta_l: Ratio,
    /// `(n-1) / (n+1)`.
    pub r_monotone: Ratio,
    /// Area `(n-k-1)/(n+1)` the class `σ` must have.
    pub required_area: Ratio,
    /// Area `1 - r` of the Maslov-2 discs of `L_r`.
    pub maslov2_area: Ratio,
    /// `required_area` lies in the attainable interval `(0, r)`.
    pub feasible: bool,
}

pub fn monotonicity_budget(n: usize, k: usize) -> Result<MonotonicityBudget> {
    if k < 2 || k + 3 > n {
        return Err(Error::OutOfRange(alloc::format!(
            "the CP^n examples need 2 <= k <= n - 3, got n = {n}, k = {k}"
        )));
    }
    let m = (n + 1) as i64;
    let eta_ambient = Ratio::new(2, m);
    let eta_l = Ratio::new(1, m);
    let r_monotone = Ratio::new(n as i64 - 1, m);
    let required_area = Ratio::new((n - k - 1) as i64, m);
    let maslov2_area = Ratio::new(1, 1) - r_monotone;
    let zero = Ratio::new(0, 1);
    Ok(MonotonicityBudget {
        n,
        k,
        eta_ambient,
        eta_l,
        r_monotone,
        required_area,
        maslov2_area,
        feasible: zero < required_area && required_area < r_monotone,
    })
}

/// The result of `k`-antisurgery followed by 0-surgery on `L_r = S^1 x S^{n-1}`.
pub fn cpn_surgery_result(n: usize, k: usize, resolution: SumFactor) -> Result<ManifoldDescriptor> {
    monotonicity_budget(n, k)?;
    antisurgery(&ManifoldDescriptor::sphere_product(1, n - 1)?, k, Some(resolution))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SafetyVerdict {
    pub c: f64,
    pub checked: usize,
    pub passed: bool,
    /// Smallest `|y| / |x|` seen, with its point.
    pub worst: Option<([f64; 2], f64)>,
}

/// Checks `|y| > c |x|` on the points of `γ+` outside the disc of radius `exclude`.
pub fn so_n_safety_check(c: f64, gamma_plus: &PlanarCurve, exclude: f64) -> Result<SafetyVerdict> {
    if !(c > 0.0) {
        return Err(Error::InvalidParameter {
            name: "c",
            reason: "need c > 0".into(),
        });
    }
    let mut worst: Option<([f64; 2], f64)> = None;
    let mut checked = 0;
    let mut passed = true;
    for &p in gamma_plus.points() {
        if math::hypot(p[0], p[1]) <= exclude {
            continue;
        }
        checked += 1;
        if !(math::abs(p[1]) > c * math::abs(p[0])) {
            passed = false;
        }
        let ratio = if p[0] == 0.0 { f64::INFINITY } else { math::abs(p[1] / p[0]) };
        if worst.map_or(true, |w| ratio < w.1) {
            worst = Some((p, ratio));
        }
    }
    Ok(SafetyVerdict {
        c,
        checked,
        passed,
        worst,
    })
}

/// Grid maximum of `|y| / |x|` over `Λ'` away from its double point: a
/// numerical value for the slope constant `c(ε)`.
pub fn estimate_slope_constant(geom: &HandleGeometry, grid: usize, exclude: f64) -> f64 {
    let n = geom.params().n;
    let eps = geom.params().epsilon;
    let reach = math::sqrt(eps);
    let g = grid.max(2);
    let mut best: f64 = 0.0;
    let mut idx = alloc::vec![0usize; n];
    loop {
        let x: Vec<f64> = idx.iter().map(|&i| -reach + 2.0 * reach * (i as f64 + 0.5) / g as f64).collect();
        let mut p = alloc::vec![1.0];
        p.extend_from_slice(&x);
        let nx = norm(&x);
        if nx > exclude && geom.f(&p) >= F_MIN {
            let y = geom.d_big_f(&p);
            best = best.max(norm(&y[1..]) / nx);
        }
        let mut d = 0;
        while d < n {
            idx[d] += 1;
            if idx[d] < g {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
        if d == n {
            break;
        }
    }
    best
}
