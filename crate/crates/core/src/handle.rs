//! The immersed Lagrangian handle `Γ ⊂ T*R^{n+1}`: the two graphs of `±dF`
//! with `F = f^{3/2}` over `{f >= 0}`, where
//! `f(x0, x) = r² + σ(x0) ρ(r²) - s² - 1`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::linalg::{math, Mat};
use crate::profile::{Jet, StepProfile};
use crate::symplectic::{
    find_double_points, DoublePoint, DoublePointSearch, LagrangianFrame, LagrangianPatch,
    ParamBox, PhasePoint, PlanarCurve, RefinementStatus,
};
use crate::{Error, Result};

/// Sheets are sampled only where `f >= F_MIN`.
pub const F_MIN: f64 = 1e-6;
const X0_RANGE: (f64, f64) = (-0.5, 1.5);
const X_RANGE: (f64, f64) = (-1.5, 1.5);
const PROFILE_SAMPLES: usize = 4001;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct HandleParams {
    pub n: usize,
    pub k: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub sigma_profile: StepProfile,
    pub rho_profile: StepProfile,
    /// `ρ ≡ 1` on `[0, rho_plateau]`.
    pub rho_plateau: f64,
}

impl HandleParams {
    /// Default profiles: smootherstep for `σ`, a plateau ramp of width `ε/4`
    /// for `ρ` starting at `r² = ε/2`.
    pub fn new(n: usize, k: usize, epsilon: f64, delta: f64) -> Result<Self> {
        let p = Self {
            n,
            k,
            epsilon,
            delta,
            sigma_profile: StepProfile::Smootherstep,
            rho_profile: StepProfile::PlateauRamp {
                ramp: (epsilon / 4.0).clamp(1e-3, 0.5),
            },
            rho_plateau: epsilon / 2.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_profiles(mut self, sigma: StepProfile, rho: StepProfile) -> Result<Self> {
        self.sigma_profile = sigma;
        self.rho_profile = rho;
        self.validate()?;
        Ok(self)
    }

    pub fn sigma(&self, x0: f64) -> Jet {
        let w = 1.0 - 2.0 * self.delta;
        self.sigma_profile
            .eval((x0 - self.delta) / w)
            .rescaled_argument(w)
            .scaled(1.0 + self.epsilon)
    }

    pub fn rho(&self, r2: f64) -> Jet {
        let w = 1.0 + 2.0 * self.epsilon - self.rho_plateau;
        let s = self.rho_profile.eval((r2 - self.rho_plateau) / w).rescaled_argument(w);
        Jet {
            value: 1.0 - s.value,
            d1: -s.d1,
            d2: -s.d2,
        }
    }

    /// Smallest sampled value of `ρ'`; must stay above `-1/(1+ε)`.
    pub fn min_rho_slope(&self) -> f64 {
        let top = 1.0 + 2.0 * self.epsilon;
        (0..PROFILE_SAMPLES)
            .map(|i| self.rho(top * i as f64 / (PROFILE_SAMPLES - 1) as f64).d1)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |name, reason: &str| Error::InvalidParameter {
            name,
            reason: reason.into(),
        };
        if self.n == 0 {
            return Err(invalid("n", "need n >= 1"));
        }
        if self.k >= self.n {
            return Err(invalid("k", "need 0 <= k <= n-1"));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(invalid("epsilon", "need epsilon > 0"));
        }
        if !(self.delta > 0.0 && self.delta < 0.5) {
            return Err(invalid("delta", "need 0 < delta < 1/2"));
        }
        if !(self.rho_plateau > 0.0 && self.rho_plateau < 1.0 + 2.0 * self.epsilon) {
            return Err(invalid("rho_plateau", "need 0 < r0^2 < 1 + 2 epsilon"));
        }
        self.sigma_profile
            .validate()
            .map_err(|r| invalid("sigma_profile", r))?;
        self.rho_profile
            .validate()
            .map_err(|r| invalid("rho_profile", r))?;
        let cond = |condition, at, detail: String| Error::ProfileCondition {
            condition,
            at,
            detail,
        };
        let eps = self.epsilon;
        let m = (PROFILE_SAMPLES - 1) as f64;
        for i in 0..PROFILE_SAMPLES {
            let t = i as f64 / m;
            let lo = X0_RANGE.0 + (self.delta - X0_RANGE.0) * t;
            if self.sigma(lo).value != 0.0 {
                return Err(cond("sigma = 0 for x0 <= delta", lo, "nonzero value".into()));
            }
            let hi = 1.0 - self.delta + (X0_RANGE.1 - 1.0 + self.delta) * t;
            if math::abs(self.sigma(hi).value - (1.0 + eps)) > 1e-14 {
                return Err(cond("sigma = 1 + eps for x0 >= 1 - delta", hi, "wrong value".into()));
            }
            if i > 0 && i < PROFILE_SAMPLES - 1 {
                let mid = self.delta + (1.0 - 2.0 * self.delta) * t;
                if !(self.sigma(mid).d1 > 0.0) {
                    return Err(cond("sigma' > 0 on (delta, 1 - delta)", mid, "not increasing".into()));
                }
            }
            let near = self.rho_plateau * t;
            if self.rho(near).value != 1.0 {
                return Err(cond("rho = 1 near 0", near, "not flat".into()));
            }
            let far = (1.0 + 2.0 * eps) * (1.0 + t);
            if self.rho(far).value != 0.0 {
                return Err(cond("rho = 0 for r^2 >= 1 + 2 eps", far, "nonzero value".into()));
            }
            let r2 = (1.0 + 2.0 * eps) * t;
            let d = self.rho(r2).d1;
            if d > 0.0 {
                return Err(cond("rho' <= 0", r2, alloc::format!("rho' = {d}")));
            }
            if d <= -1.0 / (1.0 + eps) {
                return Err(cond(
                    "rho' > -1/(1+eps)",
                    r2,
                    alloc::format!("rho' = {d}, bound = {}", -1.0 / (1.0 + eps)),
                ));
            }
        }
        Ok(())
    }

    fn is_r(&self, i: usize) -> bool {
        (1..=self.k + 1).contains(&i)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sheet {
    Plus,
    Minus,
}

impl Sheet {
    pub fn sign(self) -> f64 {
        match self {
            Sheet::Plus => 1.0,
            Sheet::Minus => -1.0,
        }
    }
}

/// Value, gradient and Hessian of a scalar function.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    pub grad: Vec<f64>,
    pub hess: Mat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HandleGeometry {
    params: HandleParams,
}

pub fn build_handle(params: HandleParams) -> Result<HandleGeometry> {
    params.validate()?;
    Ok(HandleGeometry { params })
}

impl HandleGeometry {
    pub fn params(&self) -> &HandleParams {
        &self.params
    }

    /// `(r², s²)` of `p = (x0, x1, ..., xn)`.
    pub fn radii(&self, p: &[f64]) -> (f64, f64) {
        let mut r2 = 0.0;
        let mut s2 = 0.0;
        for (i, v) in p.iter().enumerate().skip(1) {
            if self.params.is_r(i) {
                r2 += v * v;
            } else {
                s2 += v * v;
            }
        }
        (r2, s2)
    }

    pub fn f(&self, p: &[f64]) -> f64 {
        let (r2, s2) = self.radii(p);
        r2 + self.params.sigma(p[0]).value * self.params.rho(r2).value - s2 - 1.0
    }

    pub fn f_jet(&self, p: &[f64]) -> Jet2 {
        let d = p.len();
        let (r2, s2) = self.radii(p);
        let sg = self.params.sigma(p[0]);
        let rh = self.params.rho(r2);
        let a = 1.0 + sg.value * rh.d1;
        let mut grad = alloc::vec![0.0; d];
        grad[0] = sg.d1 * rh.value;
        for i in 1..d {
            grad[i] = if self.params.is_r(i) { 2.0 * p[i] * a } else { -2.0 * p[i] };
        }
        let mut hess = Mat::zeros(d, d);
        hess[(0, 0)] = sg.d2 * rh.value;
        for i in 1..d {
            if self.params.is_r(i) {
                let h0 = 2.0 * p[i] * sg.d1 * rh.d1;
                hess[(0, i)] = h0;
                hess[(i, 0)] = h0;
                for j in i..d {
                    if self.params.is_r(j) {
                        let mut h = 4.0 * p[i] * p[j] * sg.value * rh.d2;
                        if i == j {
                            h += 2.0 * a;
                        }
                        hess[(i, j)] = h;
                        hess[(j, i)] = h;
                    }
                }
            } else {
                hess[(i, i)] = -2.0;
            }
        }
        Jet2 {
            value: r2 + sg.value * rh.value - s2 - 1.0,
            grad,
            hess,
        }
    }

    /// `F = f^{3/2}` on `{f >= 0}`.
    pub fn big_f(&self, p: &[f64]) -> f64 {
        let f = self.f(p).max(0.0);
        f * math::sqrt(f)
    }

    /// `dF = (3/2) f^{1/2} df`.
    pub fn d_big_f(&self, p: &[f64]) -> Vec<f64> {
        let j = self.f_jet(p);
        let c = 1.5 * math::sqrt(j.value.max(0.0));
        j.grad.iter().map(|g| c * g).collect()
    }

    /// `∂²F = (3/4) f^{-1/2} df df + (3/2) f^{1/2} ∂²f`, for `f > 0`.
    pub fn hess_big_f(&self, p: &[f64]) -> Mat {
        let j = self.f_jet(p);
        let sf = math::sqrt(j.value);
        let d = p.len();
        Mat::from_fn(d, d, |a, b| 0.75 / sf * j.grad[a] * j.grad[b] + 1.5 * sf * j.hess[(a, b)])
    }

    pub fn domain(&self) -> ParamBox {
        let n = self.params.n;
        let mut lo = alloc::vec![X_RANGE.0; n + 1];
        let mut hi = alloc::vec![X_RANGE.1; n + 1];
        lo[0] = X0_RANGE.0;
        hi[0] = X0_RANGE.1;
        ParamBox::new(lo, hi).expect("static box")
    }

    /// Graph of `±dF` over `{f >= F_MIN}`.
    pub fn sheet(&self, which: Sheet) -> LagrangianPatch {
        self.sheet_in(which, &LocusRegion::default())
    }

    pub fn sheet_in(&self, which: Sheet, region: &LocusRegion) -> LagrangianPatch {
        let s = which.sign();
        let label = match which {
            Sheet::Plus => "Gamma+",
            Sheet::Minus => "Gamma-",
        };
        let (g1, g2, g3) = (self.clone(), self.clone(), self.clone());
        let region = *region;
        LagrangianPatch::new(label, self.domain(), self.params.n + 1, move |p: &[f64]| {
            let y = g1.d_big_f(p).into_iter().map(|v| s * v).collect();
            PhasePoint::new(p.to_vec(), y).expect("matching lengths")
        })
        .expect("patch dimension equals ambient dimension")
        .with_jacobian(move |p: &[f64]| {
            let d = p.len();
            Mat::identity(d).vstack(&g2.hess_big_f(p).scale(s))
        })
        .with_predicate(move |p: &[f64]| g3.f(p) >= F_MIN && region.admits(&g3, p))
    }

    /// `F` restricted to the slice `x0 = c`.
    pub fn end_potential(&self, x0: f64, x: &[f64]) -> f64 {
        let mut p = alloc::vec![x0];
        p.extend_from_slice(x);
        self.big_f(&p)
    }

    /// Analytic tangent planes of the two branches of `Λ'` at its double point.
    pub fn double_point_frames(&self) -> (LagrangianFrame, LagrangianFrame) {
        let n = self.params.n;
        let c = 3.0 * math::sqrt(self.params.epsilon);
        let y = Mat::from_fn(n, n, |i, j| {
            if i != j {
                0.0
            } else if self.params.is_r(i + 1) {
                c
            } else {
                -c
            }
        });
        let plus = LagrangianFrame::new(Mat::identity(n), y.clone()).expect("graph of a symmetric matrix");
        let minus = LagrangianFrame::new(Mat::identity(n), y.scale(-1.0)).expect("graph of a symmetric matrix");
        (plus, minus)
    }
}

/// Restriction of the double-point scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocusRegion {
    pub x0_min: f64,
    pub x0_max: f64,
    pub min_r2: f64,
}

impl Default for LocusRegion {
    fn default() -> Self {
        Self {
            x0_min: f64::NEG_INFINITY,
            x0_max: f64::INFINITY,
            min_r2: 0.0,
        }
    }
}

impl LocusRegion {
    fn admits(&self, g: &HandleGeometry, p: &[f64]) -> bool {
        p[0] >= self.x0_min && p[0] <= self.x0_max && (self.min_r2 <= 0.0 || g.radii(p).0 >= self.min_r2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum End {
    /// `x0 = 0`, the embedded end.
    Lambda,
    /// `x0 = 1`, the end with one double point.
    LambdaPrime,
}

impl End {
    pub fn x0(self) -> f64 {
        match self {
            End::Lambda => 0.0,
            End::LambdaPrime => 1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EndModel {
    pub which: End,
    pub geometry: HandleGeometry,
    pub plus: LagrangianPatch,
    pub minus: LagrangianPatch,
}

/// The `x0`-frozen graphs of `±dF` in `T*R^n`.
pub fn end_model(geom: &HandleGeometry, which: End) -> EndModel {
    let n = geom.params.n;
    let x0 = which.x0();
    let patch = |sheet: Sheet| {
        let s = sheet.sign();
        let (g1, g2, g3) = (geom.clone(), geom.clone(), geom.clone());
        let lift = move |x: &[f64]| {
            let mut p = alloc::vec![x0];
            p.extend_from_slice(x);
            p
        };
        let label = match (which, sheet) {
            (End::Lambda, Sheet::Plus) => "Lambda+",
            (End::Lambda, Sheet::Minus) => "Lambda-",
            (End::LambdaPrime, Sheet::Plus) => "Lambda'+",
            (End::LambdaPrime, Sheet::Minus) => "Lambda'-",
        };
        LagrangianPatch::new(label, ParamBox::cube(n, X_RANGE.0, X_RANGE.1).expect("static box"), n, move |x: &[f64]| {
            let y = g1.d_big_f(&lift(x))[1..].iter().map(|v| s * v).collect();
            PhasePoint::new(x.to_vec(), y).expect("matching lengths")
        })
        .expect("square patch")
        .with_jacobian(move |x: &[f64]| {
            let h = g2.hess_big_f(&lift(x));
            Mat::identity(x.len()).vstack(&h.block(1, 1, x.len(), x.len()).scale(s))
        })
        .with_predicate(move |x: &[f64]| g3.f(&lift(x)) >= F_MIN)
    };
    EndModel {
        which,
        geometry: geom.clone(),
        plus: patch(Sheet::Plus),
        minus: patch(Sheet::Minus),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularLocus {
    /// Refined double points of `Γ`.
    pub points: Vec<PhasePoint>,
    /// Candidates whose refinement stalled above tolerance.
    pub unrefined: Vec<DoublePoint>,
    /// Observed `x0` range of the refined points.
    pub x0_extent: Option<(f64, f64)>,
}

/// Double points of `Γ`; every refined point must lie on
/// `{x0 >= 1 - δ, x = 0, y = 0, y0 = 0}` within `tol`.
pub fn singular_locus(
    geom: &HandleGeometry,
    region: &LocusRegion,
    search: &DoublePointSearch,
    tol: f64,
) -> Result<SingularLocus> {
    let a = geom.sheet_in(Sheet::Plus, region);
    let b = geom.sheet_in(Sheet::Minus, region);
    let found = find_double_points(&a, &b, search)?;
    let mut points = Vec::new();
    let mut unrefined = Vec::new();
    let floor = 1.0 - geom.params.delta - tol;
    for dp in found {
        if dp.status == RefinementStatus::Unrefined {
            unrefined.push(dp);
            continue;
        }
        let p = &dp.point;
        let off_x = p.x()[1..].iter().fold(0.0f64, |m, v| m.max(math::abs(*v)));
        let off_y = p.y().iter().fold(0.0f64, |m, v| m.max(math::abs(*v)));
        if p.x()[0] < floor || off_x >= tol || off_y >= tol {
            return Err(Error::ModelViolation(alloc::format!(
                "double point off the predicted locus: x = {:?}, y = {:?}",
                p.x(),
                p.y()
            )));
        }
        points.push(dp.point);
    }
    let x0_extent = points.iter().map(|p| p.x()[0]).fold(None, |acc: Option<(f64, f64)>, v| {
        Some(acc.map_or((v, v), |(lo, hi)| (lo.min(v), hi.max(v))))
    });
    Ok(SingularLocus {
        points,
        unrefined,
        x0_extent,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CylindricityReport {
    pub samples_outside: usize,
    pub samples_inside: usize,
    /// Largest `|y0|` or change of `dF` under moving `x0`, where `r² >= 1 + 2ε`.
    pub max_identity_residual: f64,
    pub max_s2: f64,
    pub s2_bound: f64,
    pub max_momentum_sq: f64,
    pub momentum_bound: f64,
    pub tolerance: f64,
    pub witness: Option<Vec<f64>>,
    pub passed: bool,
}

/// Outside `r² < 1 + 2ε` the handle is a product `R × Λ`; inside, sheet
/// points satisfy `s² < 2ε` and `|y|² < 6 sqrt(2ε)(1 + 4ε)`.
pub fn check_cylindricity(geom: &HandleGeometry, grid: usize, tol: f64) -> CylindricityReport {
    let eps = geom.params.epsilon;
    let edge = 1.0 + 2.0 * eps;
    let s2_bound = 2.0 * eps;
    let momentum_bound = 6.0 * math::sqrt(2.0 * eps) * (1.0 + 4.0 * eps);
    let probes = [X0_RANGE.0, 0.5, X0_RANGE.1];
    let mut rep = CylindricityReport {
        samples_outside: 0,
        samples_inside: 0,
        max_identity_residual: 0.0,
        max_s2: 0.0,
        s2_bound,
        max_momentum_sq: 0.0,
        momentum_bound,
        tolerance: tol,
        witness: None,
        passed: true,
    };
    for p in geom.domain().cell_centres(grid) {
        if geom.f(&p) < 0.0 {
            continue;
        }
        let (r2, s2) = geom.radii(&p);
        let dfp = geom.d_big_f(&p);
        if r2 >= edge {
            rep.samples_outside += 1;
            let mut res = math::abs(dfp[0]);
            for x0 in probes {
                let mut q = p.clone();
                q[0] = x0;
                let dq = geom.d_big_f(&q);
                for i in 1..p.len() {
                    res = res.max(math::abs(dq[i] - dfp[i]));
                }
            }
            rep.max_identity_residual = rep.max_identity_residual.max(res);
            if res > tol && rep.passed {
                rep.passed = false;
                rep.witness = Some(p.clone());
            }
        } else {
            rep.samples_inside += 1;
            let m: f64 = dfp[1..].iter().map(|v| v * v).sum();
            rep.max_s2 = rep.max_s2.max(s2);
            rep.max_momentum_sq = rep.max_momentum_sq.max(m);
            if (s2 >= s2_bound || m >= momentum_bound) && rep.passed {
                rep.passed = false;
                rep.witness = Some(p.clone());
            }
        }
    }
    rep
}

/// One lobe `{x_n >= 0}` of the slice `Λ' ∩ T*R_n`, counterclockwise,
/// computed from the sheets of `dF` at `x0 = 1`.
pub fn teardrop_curve(geom: &HandleGeometry, points: usize) -> Result<PlanarCurve> {
    let n = geom.params.n;
    if geom.params.k + 1 >= n {
        return Err(Error::InvalidParameter {
            name: "k",
            reason: "the x_n slice needs k <= n - 2".into(),
        });
    }
    let root = math::sqrt(geom.params.epsilon);
    let half = core::f64::consts::FRAC_PI_2;
    PlanarCurve::sample_closed(points.max(8), core::f64::consts::PI, |t| {
        let xn = root * math::sin(t);
        let mut p = alloc::vec![0.0; n + 1];
        p[0] = 1.0;
        p[n] = xn;
        let sign = if t <= half { 1.0 } else { -1.0 };
        [xn, sign * geom.d_big_f(&p)[n]]
    })
}

/// The whole slice `Λ' ∩ T*R_n`: two lobes meeting at the double point.
pub fn lambda_prime_slice(geom: &HandleGeometry, points: usize) -> Result<PlanarCurve> {
    let lobe = teardrop_curve(geom, points)?;
    let mut pts: Vec<[f64; 2]> = lobe.points().to_vec();
    pts.pop();
    let mirrored: Vec<[f64; 2]> = pts.iter().map(|p| [-p[0], p[1]]).collect();
    pts.extend(mirrored);
    PlanarCurve::closed(pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{transversality_gap, verify_lagrangian};

    fn geom(n: usize, k: usize) -> HandleGeometry {
        build_handle(HandleParams::new(n, k, 0.1, 0.1).unwrap()).unwrap()
    }

    #[test]
    fn formula_values() {
        let g = geom(2, 0);
        assert!((g.f(&[0.0, 1.2, 0.0]) - 0.44).abs() < 1e-14);
        assert!((g.f(&[1.0, 0.0, 0.0]) - 0.1).abs() < 1e-14);
        for x0 in [0.9, 1.0, 1.3] {
            assert!(g.d_big_f(&[x0, 0.0, 0.0]).iter().all(|v| *v == 0.0));
        }
    }

    #[test]
    fn analytic_derivatives_match_finite_differences() {
        let g = geom(3, 1);
        let h = 1e-6;
        for p in [[0.3, 1.1, 0.2, 0.1], [0.55, 0.9, 0.5, 0.3], [0.95, 0.1, -0.05, 0.2]] {
            if g.f(&p) < 1e-3 {
                continue;
            }
            let d = g.d_big_f(&p);
            let hs = g.hess_big_f(&p);
            for i in 0..4 {
                let mut a = p;
                let mut b = p;
                a[i] += h;
                b[i] -= h;
                let fd = (g.big_f(&a) - g.big_f(&b)) / (2.0 * h);
                assert!((fd - d[i]).abs() < 1e-6, "{i} {fd} {}", d[i]);
                let da = g.d_big_f(&a);
                let db = g.d_big_f(&b);
                for j in 0..4 {
                    assert!(((da[j] - db[j]) / (2.0 * h) - hs[(i, j)]).abs() < 1e-5);
                }
            }
        }
    }

    #[test]
    fn steep_rho_is_rejected() {
        let p = HandleParams::new(2, 0, 0.1, 0.1).unwrap();
        let e = p.with_profiles(StepProfile::Smootherstep, StepProfile::Smootherstep).unwrap_err();
        assert!(matches!(e, Error::ProfileCondition { condition: "rho' > -1/(1+eps)", .. }), "{e:?}");
        assert!(p.min_rho_slope() > -1.0 / 1.1);
        assert!(HandleParams::new(2, 2, 0.1, 0.1).is_err());
        assert!(HandleParams::new(2, 0, 0.1, 0.6).is_err());
    }

    #[test]
    fn sheets_are_lagrangian() {
        let g = geom(2, 0);
        for s in [Sheet::Plus, Sheet::Minus] {
            let r = verify_lagrangian(&g.sheet(s), 12, 1e-8);
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn lambda_contains_the_sphere() {
        let g = geom(3, 1);
        let m = end_model(&g, End::Lambda);
        for t in [0.0f64, 0.7, 2.0] {
            let x = [t.cos(), t.sin(), 0.0];
            assert!(g.end_potential(0.0, &x).abs() < 1e-15);
            assert!(!m.plus.contains(&x));
        }
    }

    #[test]
    fn frames_match_sheet_limits() {
        let g = geom(3, 1);
        let (lp, lm) = g.double_point_frames();
        assert!(transversality_gap(&lp, &lm).unwrap() > 0.1);
        let m = end_model(&g, End::LambdaPrime);
        let jp = m.plus.jacobian(&[1e-7, -1e-7, 1e-7]);
        for i in 0..3 {
            for j in 0..3 {
                assert!((jp[(3 + i, j)] - lp.y()[(i, j)]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn teardrop_area_oracle() {
        for eps in [0.01f64, 0.04, 0.1] {
            let g = build_handle(HandleParams::new(3, 1, eps, 0.1).unwrap()).unwrap();
            let a = teardrop_curve(&g, 20_000).unwrap().enclosed_area().unwrap();
            let exact = 2.0 * eps.powf(1.5);
            assert!((a - exact).abs() / exact < 1e-6, "{eps} {a}");
        }
        assert!(teardrop_curve(&geom(2, 1), 100).is_err());
        let full = lambda_prime_slice(&geom(2, 0), 400).unwrap();
        assert!(full.enclosed_area().unwrap().abs() < 1e-12);
    }

    #[test]
    fn cylindricity_holds() {
        let r = check_cylindricity(&geom(2, 0), 30, 1e-9);
        assert!(r.passed, "{r:?}");
        assert!(r.samples_outside > 0 && r.samples_inside > 0);
    }

    #[test]
    fn locus_of_the_smallest_handle() {
        let g = geom(1, 0);
        let s = DoublePointSearch {
            grid: 40,
            ..Default::default()
        };
        let l = singular_locus(&g, &LocusRegion::default(), &s, 1e-4).unwrap();
        assert!(!l.points.is_empty());
        assert!(l.unrefined.is_empty(), "{:?}", l.unrefined);
        let early = LocusRegion {
            x0_max: 0.1,
            ..Default::default()
        };
        assert!(singular_locus(&g, &early, &s, 1e-4).unwrap().points.is_empty());
    }
}
