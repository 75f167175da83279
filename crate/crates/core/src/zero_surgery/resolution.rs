use alloc::vec::Vec;

use super::model::{transported_model, SplitSymplecticMap, SurgeryCurve};
use crate::handle::{End, EndModel, HandleGeometry, HandleParams, Jet2, F_MIN};
use crate::linalg::{math, norm, Mat};
use crate::profile::StepProfile;
use crate::symplectic::{
    maslov_index, FrameLoop, LagrangianFrame, LagrangianPatch, ParamBox, PhasePoint, PlanarCurve,
};
use crate::{Error, Result};

/// Which branch of `Λ'` the resolution map sends `R^n x {0}` to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Resolution {
    Plus,
    Minus,
}

impl Resolution {
    pub fn name(self) -> &'static str {
        match self {
            Resolution::Plus => "plus",
            Resolution::Minus => "minus",
        }
    }
}

/// The resolution data: the branch and the size `κ` of the surgery curve.
/// The resulting area adjustment is measured, see [`AreaReport`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ResolutionChoice {
    pub sign: Resolution,
    pub kappa: f64,
}

impl ResolutionChoice {
    /// `κ = ε / 4`.
    pub fn default_for(params: &HandleParams, sign: Resolution) -> Self {
        Self {
            sign,
            kappa: params.epsilon / 4.0,
        }
    }
}

/// `Φ±` built factorwise from the two branch planes: in factor `i` the
/// first axis goes to the branch `u` and the second to the branch `v`.
pub fn resolution_map(
    plus: &LagrangianFrame,
    minus: &LagrangianFrame,
    which: Resolution,
) -> Result<SplitSymplecticMap> {
    let cp = diagonal_slopes(plus)?;
    let cm = diagonal_slopes(minus)?;
    if cp.len() != cm.len() {
        return Err(Error::DimensionMismatch {
            expected: cp.len(),
            got: cm.len(),
        });
    }
    let mut blocks = Vec::with_capacity(cp.len());
    for i in 0..cp.len() {
        let (cu, cv) = match which {
            Resolution::Plus => (cp[i], cm[i]),
            Resolution::Minus => (cm[i], cp[i]),
        };
        let gap = cv - cu;
        if math::abs(gap) < 1e-12 {
            return Err(Error::Degenerate(alloc::format!("branches are tangent in factor {i}")));
        }
        let alpha = 1.0 / math::sqrt(math::abs(gap));
        let beta = if gap > 0.0 { alpha } else { -alpha };
        blocks.push([[alpha, beta], [alpha * cu, beta * cv]]);
    }
    SplitSymplecticMap::new(blocks)
}

fn diagonal_slopes(frame: &LagrangianFrame) -> Result<Vec<f64>> {
    let (x, y) = (frame.x(), frame.y());
    let n = frame.dim();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..n {
            if i != j && (x[(i, j)] != 0.0 || y[(i, j)] != 0.0) {
                return Err(Error::InvalidParameter {
                    name: "frames",
                    reason: "branch planes must split into lines of the factors T*R_i".into(),
                });
            }
        }
        if math::abs(x[(i, i)]) < 1e-12 {
            return Err(Error::InvalidParameter {
                name: "frames",
                reason: "branch planes must be graphs over R^n".into(),
            });
        }
        out.push(y[(i, i)] / x[(i, i)]);
    }
    Ok(out)
}

/// `G = F + χ (q - F)`: the end potential `F` at `x0 = 1` interpolated to
/// its quadratic part `q` near the origin, with `χ = 1` on `|x| <= r_inner`
/// and `χ = 0` on `|x| >= r_outer`.
#[derive(Debug, Clone)]
pub struct ModifiedPotential {
    geom: HandleGeometry,
    diag: Vec<f64>,
    r_inner: f64,
    r_outer: f64,
}

impl ModifiedPotential {
    pub fn new(geom: &HandleGeometry, r_inner: f64, r_outer: f64) -> Self {
        let (plus, _) = geom.double_point_frames();
        let diag = (0..geom.params().n).map(|i| plus.y()[(i, i)]).collect();
        Self {
            geom: geom.clone(),
            diag,
            r_inner,
            r_outer,
        }
    }

    fn lift(x: &[f64]) -> Vec<f64> {
        let mut p = alloc::vec![1.0];
        p.extend_from_slice(x);
        p
    }

    /// `f` of the handle at `(1, x)`.
    pub fn f(&self, x: &[f64]) -> f64 {
        self.geom.f(&Self::lift(x))
    }

    fn original(&self, x: &[f64]) -> Jet2 {
        let p = Self::lift(x);
        let n = x.len();
        let grad = self.geom.d_big_f(&p)[1..].to_vec();
        let hess = if self.geom.f(&p) > 0.0 {
            self.geom.hess_big_f(&p).block(1, 1, n, n)
        } else {
            Mat::zeros(n, n)
        };
        Jet2 {
            value: self.geom.big_f(&p),
            grad,
            hess,
        }
    }

    pub fn jet(&self, x: &[f64]) -> Jet2 {
        let n = x.len();
        let s2: f64 = x.iter().map(|v| v * v).sum();
        let (ri2, ro2) = (self.r_inner * self.r_inner, self.r_outer * self.r_outer);
        if s2 >= ro2 {
            return self.original(x);
        }
        let eps = self.geom.params().epsilon;
        let q_value = eps * math::sqrt(eps) + 0.5 * (0..n).map(|i| self.diag[i] * x[i] * x[i]).sum::<f64>();
        let q_grad: Vec<f64> = (0..n).map(|i| self.diag[i] * x[i]).collect();
        let q_hess = Mat::from_fn(n, n, |i, j| if i == j { self.diag[i] } else { 0.0 });
        if s2 <= ri2 {
            return Jet2 {
                value: q_value,
                grad: q_grad,
                hess: q_hess,
            };
        }
        let f = self.original(x);
        let w = ro2 - ri2;
        let st = StepProfile::Smootherstep.eval((s2 - ri2) / w);
        let (c, c1, c2) = (1.0 - st.value, -st.d1 / w, -st.d2 / (w * w));
        let dchi: Vec<f64> = x.iter().map(|v| 2.0 * c1 * v).collect();
        let d = q_value - f.value;
        let dd: Vec<f64> = (0..n).map(|i| q_grad[i] - f.grad[i]).collect();
        let grad = (0..n).map(|i| f.grad[i] + c * dd[i] + d * dchi[i]).collect();
        let hess = Mat::from_fn(n, n, |i, j| {
            let ddchi = 4.0 * c2 * x[i] * x[j] + if i == j { 2.0 * c1 } else { 0.0 };
            f.hess[(i, j)]
                + c * (q_hess[(i, j)] - f.hess[(i, j)])
                + dchi[i] * dd[j]
                + dd[i] * dchi[j]
                + d * ddchi
        });
        Jet2 {
            value: f.value + c * d,
            grad,
            hess,
        }
    }
}

/// Area bookkeeping of the resolved slice.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AreaReport {
    /// `2 ε^{3/2}`, the area of one teardrop of `Λ'`.
    pub teardrop: f64,
    /// Signed areas of the slice curves.
    pub curve_areas: Vec<f64>,
    /// Area of the class `σ`: one lobe for `Φ-`, half the joined curve for `Φ+`.
    pub class_area: f64,
    /// `class_area - teardrop`.
    pub alpha: f64,
}

/// `Λ'` with its double point replaced by the transported surgery model.
#[derive(Debug, Clone)]
pub struct ResolvedEnd {
    pub choice: ResolutionChoice,
    pub curve: SurgeryCurve,
    pub map: SplitSymplecticMap,
    /// Half-length of the model's `t` interval.
    pub t_max: f64,
    pub r_inner: f64,
    pub r_outer: f64,
    /// Ambient radius outside which the result agrees with `Λ'`.
    pub support_radius: f64,
    pub potential: ModifiedPotential,
    pub core: LagrangianPatch,
    pub plus: LagrangianPatch,
    pub minus: LagrangianPatch,
    /// Slice with `T*R_n`; empty when `k = n - 1`.
    pub slices: Vec<PlanarCurve>,
    pub area: Option<AreaReport>,
}

impl ResolvedEnd {
    pub fn patches(&self) -> [&LagrangianPatch; 3] {
        [&self.core, &self.plus, &self.minus]
    }
}

/// Sheet patches start this factor beyond the core radius, so the pieces
/// do not overlap.
const SEAM_GAP: f64 = 1.05;

pub fn resolve_double_point(end: &EndModel, choice: &ResolutionChoice) -> Result<ResolvedEnd> {
    if end.which != End::LambdaPrime {
        return Err(Error::InvalidParameter {
            name: "end",
            reason: "only the end with the double point can be resolved".into(),
        });
    }
    let geom = &end.geometry;
    let params = geom.params();
    let n = params.n;
    let eps = params.epsilon;
    let curve = SurgeryCurve::new(choice.kappa)?;
    let (fp, fm) = geom.double_point_frames();
    let map = resolution_map(&fp, &fm, choice.sign)?;
    let alpha = (0..n).map(|i| map.block(i)[0][0]).fold(0.0, f64::max);
    let slope = (0..n).map(|i| math::abs(fp.y()[(i, i)])).fold(0.0, f64::max);
    let t_max = 1.2 * choice.kappa;
    let r_inner = alpha * t_max;
    let r_outer = r_inner / 0.75;
    if r_outer >= 0.5 * math::sqrt(eps) {
        return Err(Error::InvalidParameter {
            name: "kappa",
            reason: alloc::format!(
                "kappa = {} pushes the gluing region to radius {r_outer}, beyond half the teardrop width",
                choice.kappa
            ),
        });
    }
    let potential = ModifiedPotential::new(geom, r_inner, r_outer);
    let mut core = transported_model(&curve, &map, t_max)?;
    core.set_label(match choice.sign {
        Resolution::Plus => "Phi+(h_gamma)",
        Resolution::Minus => "Phi-(h_gamma)",
    });
    let sheet = |s: f64, label: &'static str| {
        let (p1, p2, p3) = (potential.clone(), potential.clone(), potential.clone());
        let cut = SEAM_GAP * r_inner;
        LagrangianPatch::new(label, ParamBox::cube(n, -1.5, 1.5).expect("static box"), n, move |x: &[f64]| {
            let y = p1.jet(x).grad.into_iter().map(|v| s * v).collect();
            PhasePoint::new(x.to_vec(), y).expect("matching lengths")
        })
        .expect("square patch")
        .with_jacobian(move |x: &[f64]| Mat::identity(x.len()).vstack(&p2.jet(x).hess.scale(s)))
        .with_predicate(move |x: &[f64]| p3.f(x) >= F_MIN && norm(x) >= cut)
    };
    let plus = sheet(1.0, "Lambda#+");
    let minus = sheet(-1.0, "Lambda#-");
    let mut out = ResolvedEnd {
        choice: *choice,
        curve,
        map,
        t_max,
        r_inner,
        r_outer,
        support_radius: r_outer * math::sqrt(1.0 + slope * slope),
        potential,
        core,
        plus,
        minus,
        slices: Vec::new(),
        area: None,
    };
    if params.k + 2 <= n {
        out.slices = slice_curves(&out, 400)?;
        let curve_areas = out
            .slices
            .iter()
            .map(|c| c.enclosed_area())
            .collect::<Result<Vec<_>>>()?;
        let class_area = match choice.sign {
            Resolution::Minus => curve_areas[0],
            Resolution::Plus => curve_areas[0] / 2.0,
        };
        let teardrop = 2.0 * eps * math::sqrt(eps);
        if !(math::abs(class_area - teardrop) < teardrop) {
            return Err(Error::ModelViolation(alloc::format!(
                "area adjustment {} is not smaller than the teardrop",
                class_area - teardrop
            )));
        }
        out.area = Some(AreaReport {
            teardrop,
            curve_areas,
            class_area,
            alpha: class_area - teardrop,
        });
    }
    Ok(out)
}

/// Pieces of a closed loop in the slice `T*R_n`, all counterclockwise.
#[derive(Debug, Clone, Copy)]
enum Piece {
    /// Branch `±dG` along the `x_n` axis from `|x_n| = r_inner` to the tip
    /// (`outward`) or back; `side` is the sign of `x_n`.
    Sheet { sign: f64, side: f64, outward: bool },
    /// The transported model at `ω = omega e_n`, `t` running from `from` to `-from`.
    Core { omega: f64, from: f64 },
}

/// The loops bounding the class `σ` (first entry) and, for `Φ-`, the mirror lobe.
fn loops(which: Resolution) -> Vec<Vec<Piece>> {
    use Piece::*;
    match which {
        Resolution::Minus => alloc::vec![
            alloc::vec![
                Sheet { sign: 1.0, side: 1.0, outward: true },
                Sheet { sign: -1.0, side: 1.0, outward: false },
                Core { omega: -1.0, from: -1.0 },
            ],
            alloc::vec![
                Sheet { sign: 1.0, side: -1.0, outward: true },
                Sheet { sign: -1.0, side: -1.0, outward: false },
                Core { omega: 1.0, from: -1.0 },
            ],
        ],
        Resolution::Plus => alloc::vec![alloc::vec![
            Sheet { sign: 1.0, side: 1.0, outward: true },
            Sheet { sign: -1.0, side: 1.0, outward: false },
            Core { omega: 1.0, from: 1.0 },
            Sheet { sign: 1.0, side: -1.0, outward: true },
            Sheet { sign: -1.0, side: -1.0, outward: false },
            Core { omega: -1.0, from: 1.0 },
        ]],
    }
}

/// Sample of one loop: the slice point and the tangent line in each factor.
struct LoopSample {
    point: [f64; 2],
    lines: Vec<[f64; 2]>,
}

/// Samples `piece` at `m + 1` points; `tip_floor` bounds `f` away from 0 at
/// the teardrop tip, where the sheet Hessian blows up.
fn sample_piece(r: &ResolvedEnd, piece: Piece, m: usize, tip_floor: f64) -> Vec<LoopSample> {
    let n = r.map.dim();
    let eps = r.potential.geom.params().epsilon;
    let root = math::sqrt(eps);
    let mut out = Vec::with_capacity(m + 1);
    match piece {
        Piece::Sheet { sign, side, outward } => {
            let th0 = math::asin(r.r_inner / root);
            let th1 = if tip_floor > 0.0 {
                math::acos(math::sqrt(tip_floor / eps))
            } else {
                core::f64::consts::FRAC_PI_2
            };
            for i in 0..=m {
                let mut s = i as f64 / m as f64;
                if !outward {
                    s = 1.0 - s;
                }
                let th = th0 + (th1 - th0) * s;
                let mut x = alloc::vec![0.0; n];
                x[n - 1] = side * root * math::sin(th);
                let jet = r.potential.jet(&x);
                let point = [x[n - 1], sign * jet.grad[n - 1]];
                let lines = (0..n).map(|j| [1.0, sign * jet.hess[(j, j)]]).collect();
                out.push(LoopSample { point, lines });
            }
        }
        Piece::Core { omega, from } => {
            for i in 0..=m {
                let t = from * r.t_max * (1.0 - 2.0 * i as f64 / m as f64);
                let (a, b) = (r.curve.a(t), r.curve.b(t));
                let p = r.map.apply_factor(n - 1, [a.value, b.value]);
                let mut lines: Vec<[f64; 2]> = (0..n - 1).map(|j| r.map.apply_factor(j, [a.value, b.value])).collect();
                let v = r.map.apply_factor(n - 1, [a.d1, b.d1]);
                lines.push([omega * v[0], omega * v[1]]);
                out.push(LoopSample {
                    point: [omega * p[0], omega * p[1]],
                    lines,
                });
            }
        }
    }
    out
}

fn slice_curves(r: &ResolvedEnd, m: usize) -> Result<Vec<PlanarCurve>> {
    loops(r.choice.sign)
        .into_iter()
        .map(|pieces| {
            let mut pts: Vec<[f64; 2]> = Vec::new();
            for piece in pieces {
                let s = sample_piece(r, piece, m, 0.0);
                pts.extend(s[..m].iter().map(|s| s.point));
            }
            PlanarCurve::closed(pts)
        })
        .collect()
}

/// Outcome of the Maslov computation on the loop bounding `σ`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MaslovComputation {
    pub resolution: Resolution,
    /// Winding of the full product loop.
    pub raw_winding: i64,
    /// Winding of the loop of lines in each factor `T*R_i`.
    pub per_factor: Vec<i64>,
    /// `μ(σ)`: the raw winding, halved for `Φ+`.
    pub mu: i64,
    pub frames: usize,
}

/// Distance of the last loop frame from the tip of the teardrop, in `f`.
const TIP_FLOOR: f64 = 1e-10;

pub fn maslov_of_resolution(params: &HandleParams, choice: &ResolutionChoice) -> Result<MaslovComputation> {
    let n = params.n;
    if params.k + 2 > n {
        return Err(Error::InvalidParameter {
            name: "k",
            reason: "the Maslov computation needs k <= n - 2".into(),
        });
    }
    let geom = crate::handle::build_handle(params.clone())?;
    let end = crate::handle::end_model(&geom, End::LambdaPrime);
    let r = resolve_double_point(&end, choice)?;
    let pieces = loops(choice.sign).swap_remove(0);
    let mut m = 256;
    loop {
        let mut lines: Vec<Vec<[f64; 2]>> = Vec::new();
        for p in &pieces {
            let s = sample_piece(&r, *p, m, TIP_FLOOR);
            lines.extend(s[..m].iter().map(|s| s.lines.clone()));
        }
        lines.push(lines[0].clone());
        match wind(&lines, n) {
            Ok((raw, per_factor)) => {
                let mu = match choice.sign {
                    Resolution::Minus => raw,
                    Resolution::Plus if raw % 2 == 0 => raw / 2,
                    Resolution::Plus => {
                        return Err(Error::ModelViolation(alloc::format!(
                            "the joined loop has odd winding {raw}"
                        )))
                    }
                };
                return Ok(MaslovComputation {
                    resolution: choice.sign,
                    raw_winding: raw,
                    per_factor,
                    mu,
                    frames: lines.len(),
                });
            }
            Err(Error::RefinementNeeded { .. }) if m < 1 << 14 => m *= 2,
            Err(e) => return Err(e),
        }
    }
}

fn wind(lines: &[Vec<[f64; 2]>], n: usize) -> Result<(i64, Vec<i64>)> {
    let frames = lines
        .iter()
        .map(|l| {
            let unit: Vec<[f64; 2]> = l.iter().map(|v| {
                let h = math::hypot(v[0], v[1]);
                [v[0] / h, v[1] / h]
            }).collect();
            let x = Mat::from_fn(n, n, |i, j| if i == j { unit[i][0] } else { 0.0 });
            let y = Mat::from_fn(n, n, |i, j| if i == j { unit[i][1] } else { 0.0 });
            LagrangianFrame::new(x, y)
        })
        .collect::<Result<Vec<_>>>()?;
    let raw = maslov_index(&FrameLoop::new(frames)?)?;
    let per_factor = (0..n)
        .map(|j| {
            let frames = lines
                .iter()
                .map(|l| LagrangianFrame::from_columns(&[alloc::vec![l[j][0], l[j][1]]]))
                .collect::<Result<Vec<_>>>()?;
            maslov_index(&FrameLoop::new(frames)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((raw, per_factor))
}
