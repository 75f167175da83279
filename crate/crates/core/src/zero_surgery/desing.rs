use alloc::vec::Vec;

use super::model::SurgeryCurve;
use crate::linalg::{math, norm, Mat};
use crate::symplectic::{
    find_double_points, hausdorff_distance, transversality_gap, DoublePointSearch, LagrangianFrame,
    LagrangianPatch, ParamBox, PhasePoint, PlanarCurve, RefinementStatus,
};
use crate::{Error, Result};

/// The curves `η±(x) = (x, ±y(x))` with `y(x) = (-x)^3` for `x < 0` and
/// `y = 0` for `x >= 0`: they coincide on the half-line and separate to the left.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EtaPair;

impl EtaPair {
    pub fn y(&self, x: f64) -> f64 {
        if x < 0.0 {
            -x * x * x
        } else {
            0.0
        }
    }

    pub fn dy(&self, x: f64) -> f64 {
        if x < 0.0 {
            -3.0 * x * x
        } else {
            0.0
        }
    }

    /// `(η+, η-)` sampled on `[lo, hi]`.
    pub fn curves(&self, lo: f64, hi: f64, samples: usize) -> (PlanarCurve, PlanarCurve) {
        let m = samples.max(2);
        let xs: Vec<f64> = (0..m).map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64).collect();
        (
            PlanarCurve::open(xs.iter().map(|&x| [x, self.y(x)]).collect()),
            PlanarCurve::open(xs.iter().map(|&x| [x, -self.y(x)]).collect()),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DesingularizationReport {
    /// Refined double points of `W = η+ x λ+ ∪ η- x λ-`.
    pub double_points: usize,
    pub unrefined: usize,
    /// Range of the `η` coordinate `x` over the double points.
    pub x_extent: (f64, f64),
    /// Largest distance of a double point from `{x >= 0, y = 0} x {0}`.
    pub locus_offset: f64,
    /// Crossings of the fibre slice of `W` (the two branch lines).
    pub w_crossings: usize,
    /// Crossings of the fibre slice of the desingularized `W♮`.
    pub sharp_crossings: usize,
    /// Hausdorff distance between the two fibre slices away from the splice.
    pub splice_hausdorff: f64,
    pub eta: (PlanarCurve, PlanarCurve),
    /// Fibre slices in the coordinates where the branches are the axes.
    pub w_slice: Vec<PlanarCurve>,
    pub sharp_slice: Vec<PlanarCurve>,
    pub passed: bool,
}

fn w_patch(eta: EtaPair, frame: &LagrangianFrame, s: f64, label: &'static str) -> Result<LagrangianPatch> {
    let n = frame.dim();
    let (x, y) = (frame.x().clone(), frame.y().clone());
    let (x2, y2) = (x.clone(), y.clone());
    Ok(LagrangianPatch::new(label, ParamBox::cube(n + 1, -1.0, 1.0)?, n + 1, move |p: &[f64]| {
        let u = &p[1..];
        let mut xs = alloc::vec![p[0]];
        xs.extend(x.mul_vec(u));
        let mut ys = alloc::vec![s * eta.y(p[0])];
        ys.extend(y.mul_vec(u));
        PhasePoint::new(xs, ys).expect("matching lengths")
    })?
    .with_jacobian(move |p: &[f64]| {
        let mut j = Mat::zeros(2 * n + 2, n + 1);
        j[(0, 0)] = 1.0;
        j[(n + 1, 0)] = s * eta.dy(p[0]);
        for r in 0..n {
            for c in 0..n {
                j[(1 + r, 1 + c)] = x2[(r, c)];
                j[(n + 2 + r, 1 + c)] = y2[(r, c)];
            }
        }
        j
    }))
}

/// Builds `W`, locates its double points, and compares the fibre slices of
/// `W` and its desingularization by the surgery curve.
pub fn desingularization_model(
    eta: &EtaPair,
    plus: &LagrangianFrame,
    minus: &LagrangianFrame,
    curve: &SurgeryCurve,
    search: &DoublePointSearch,
) -> Result<DesingularizationReport> {
    if plus.dim() != minus.dim() {
        return Err(Error::DimensionMismatch {
            expected: plus.dim(),
            got: minus.dim(),
        });
    }
    if transversality_gap(plus, minus)? < 1e-9 {
        return Err(Error::Degenerate("branch planes are not transverse".into()));
    }
    curve.verify()?;
    let wp = w_patch(*eta, plus, 1.0, "W+")?;
    let wm = w_patch(*eta, minus, -1.0, "W-")?;
    let found = find_double_points(&wp, &wm, search)?;
    let refined: Vec<_> = found.iter().filter(|p| p.status == RefinementStatus::Refined).collect();
    let mut x_extent = (f64::INFINITY, f64::NEG_INFINITY);
    let mut locus_offset: f64 = 0.0;
    for p in &refined {
        let x0 = p.point.x()[0];
        x_extent = (x_extent.0.min(x0), x_extent.1.max(x0));
        let rest = norm(&p.point.x()[1..]).max(norm(p.point.y()));
        locus_offset = locus_offset.max((-x0).max(0.0)).max(rest);
    }

    let k = curve.kappa();
    let reach = 4.0 * k;
    let m = 400i32;
    // symmetric grid, so that `-t` is sampled exactly whenever `t` is
    let ts: Vec<f64> = (-m..=m).map(|i| reach * i as f64 / m as f64).collect();
    let line = |dir: [f64; 2]| PlanarCurve::open(ts.iter().map(|&t| [t * dir[0], t * dir[1]]).collect());
    let w_slice = alloc::vec![line([1.0, 0.0]), line([0.0, 1.0])];
    let gamma = PlanarCurve::open(ts.iter().map(|&t| curve.point(t)).collect());
    let sharp_slice = alloc::vec![gamma.clone(), gamma.map(|p| [-p[0], -p[1]])];
    let count = |c: &[PlanarCurve]| {
        c[0].self_crossings().len() + c[1].self_crossings().len() + c[0].crossings_with(&c[1]).len()
    };
    let w_crossings = count(&w_slice);
    let sharp_crossings = count(&sharp_slice);
    let outside = |c: &[PlanarCurve]| -> Vec<[f64; 2]> {
        c.iter()
            .flat_map(|c| c.points().iter().copied())
            .filter(|p| math::abs(p[0]).max(math::abs(p[1])) >= k)
            .collect()
    };
    let splice_hausdorff = hausdorff_distance(&outside(&w_slice), &outside(&sharp_slice));

    let passed = !refined.is_empty()
        && refined.len() == found.len()
        && locus_offset <= 1e-9
        && sharp_crossings == 0
        && splice_hausdorff < 1e-9;
    Ok(DesingularizationReport {
        double_points: refined.len(),
        unrefined: found.len() - refined.len(),
        x_extent,
        locus_offset,
        w_crossings,
        sharp_crossings,
        splice_hausdorff,
        eta: eta.curves(-1.0, 1.0, 201),
        w_slice,
        sharp_slice,
        passed,
    })
}
