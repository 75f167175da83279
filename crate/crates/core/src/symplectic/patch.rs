use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::phase::{omega_unchecked, PhasePoint};
use crate::linalg::{math, Mat};
use crate::{Error, Result};

pub type MapFn = Arc<dyn Fn(&[f64]) -> PhasePoint + Send + Sync>;
/// Returns the `2N x d` matrix whose columns are `∂ψ/∂u_i` in `(x, y)` layout.
pub type JacobianFn = Arc<dyn Fn(&[f64]) -> Mat + Send + Sync>;
pub type DomainPredicate = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

#[derive(Clone)]
pub enum Jacobian {
    Analytic(JacobianFn),
    /// Central differences; `relative_step` is scaled by each side of the box.
    FiniteDifference { relative_step: f64 },
}

impl fmt::Debug for Jacobian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Jacobian::Analytic(_) => f.write_str("Analytic"),
            Jacobian::FiniteDifference { relative_step } => f
                .debug_struct("FiniteDifference")
                .field("relative_step", relative_step)
                .finish(),
        }
    }
}

/// Axis-aligned parameter box.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamBox {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl ParamBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                got: hi.len(),
            });
        }
        if lo.is_empty() {
            return Err(Error::InvalidParameter {
                name: "domain",
                reason: "parameter box must have dimension at least 1".into(),
            });
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a < b) || !a.is_finite() || !b.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "domain",
                reason: "every side needs finite lo < hi".into(),
            });
        }
        Ok(Self { lo, hi })
    }

    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(alloc::vec![lo; dim], alloc::vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn side(&self, i: usize) -> f64 {
        self.hi[i] - self.lo[i]
    }

    pub fn contains(&self, u: &[f64]) -> bool {
        u.len() == self.dim()
            && u
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(v, (a, b))| *v >= *a && *v <= *b)
    }

    /// Cell centres of a uniform `grid^d` subdivision.
    pub fn cell_centres(&self, grid: usize) -> Vec<Vec<f64>> {
        let d = self.dim();
        let g = grid.max(1);
        let total = g.checked_pow(d as u32).unwrap_or(usize::MAX);
        let mut out = Vec::with_capacity(total.min(1 << 22));
        let mut idx = alloc::vec![0usize; d];
        loop {
            let p: Vec<f64> = (0..d)
                .map(|i| self.lo[i] + (idx[i] as f64 + 0.5) / g as f64 * self.side(i))
                .collect();
            out.push(p);
            let mut axis = 0;
            loop {
                if axis == d {
                    return out;
                }
                idx[axis] += 1;
                if idx[axis] < g {
                    break;
                }
                idx[axis] = 0;
                axis += 1;
            }
        }
    }
}

/// A parametrized piece `ψ: U ⊂ R^d → T*R^N` of a candidate Lagrangian.
#[derive(Clone)]
pub struct LagrangianPatch {
    label: String,
    domain: ParamBox,
    inside: Option<DomainPredicate>,
    ambient_dim: usize,
    map: MapFn,
    jacobian: Jacobian,
}

impl fmt::Debug for LagrangianPatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LagrangianPatch")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("ambient_dim", &self.ambient_dim)
            .field("jacobian", &self.jacobian)
            .finish_non_exhaustive()
    }
}

impl LagrangianPatch {
    pub fn new(
        label: impl Into<String>,
        domain: ParamBox,
        ambient_dim: usize,
        map: impl Fn(&[f64]) -> PhasePoint + Send + Sync + 'static,
    ) -> Result<Self> {
        if domain.dim() > ambient_dim {
            return Err(Error::InvalidParameter {
                name: "domain",
                reason: alloc::format!(
                    "patch dimension {} exceeds ambient dimension {}",
                    domain.dim(),
                    ambient_dim
                ),
            });
        }
        Ok(Self {
            label: label.into(),
            domain,
            inside: None,
            ambient_dim,
            map: Arc::new(map),
            jacobian: Jacobian::FiniteDifference {
                relative_step: 1e-5,
            },
        })
    }

    pub fn with_jacobian(
        mut self,
        jac: impl Fn(&[f64]) -> Mat + Send + Sync + 'static,
    ) -> Self {
        self.jacobian = Jacobian::Analytic(Arc::new(jac));
        self
    }

    pub fn with_finite_differences(mut self, relative_step: f64) -> Self {
        self.jacobian = Jacobian::FiniteDifference { relative_step };
        self
    }

    /// Restricts the box further; points failing the predicate are outside.
    pub fn with_predicate(mut self, inside: impl Fn(&[f64]) -> bool + Send + Sync + 'static) -> Self {
        self.inside = Some(Arc::new(inside));
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    pub fn domain(&self) -> &ParamBox {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn contains(&self, u: &[f64]) -> bool {
        self.domain.contains(u) && self.inside.as_ref().map_or(true, |p| p(u))
    }

    pub fn eval(&self, u: &[f64]) -> PhasePoint {
        (self.map)(u)
    }

    pub fn eval_flat(&self, u: &[f64]) -> Vec<f64> {
        self.eval(u).to_flat()
    }

    pub fn jacobian(&self, u: &[f64]) -> Mat {
        match &self.jacobian {
            Jacobian::Analytic(j) => j(u),
            Jacobian::FiniteDifference { relative_step } => {
                let d = self.dim();
                let mut cols = Vec::with_capacity(d);
                let mut w = u.to_vec();
                for i in 0..d {
                    let h = relative_step * self.domain.side(i);
                    w[i] = u[i] + h;
                    let plus = self.eval_flat(&w);
                    w[i] = u[i] - h;
                    let minus = self.eval_flat(&w);
                    w[i] = u[i];
                    cols.push(
                        plus.iter()
                            .zip(&minus)
                            .map(|(a, b)| (a - b) / (2.0 * h))
                            .collect::<Vec<_>>(),
                    );
                }
                Mat::from_columns(2 * self.ambient_dim, &cols)
            }
        }
    }

    /// Sample parameters: cell centres of a `grid^d` subdivision inside the domain.
    pub fn samples(&self, grid: usize) -> Vec<Vec<f64>> {
        self.domain
            .cell_centres(grid)
            .into_iter()
            .filter(|u| self.contains(u))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VerificationReport {
    pub label: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub worst_sample: Option<Vec<f64>>,
    /// First sample where the Jacobian drops rank, if any.
    pub immersion_failure: Option<Vec<f64>>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn is_immersion_failure(&self) -> bool {
        self.immersion_failure.is_some()
    }
}

/// Relative rank threshold for declaring an immersion failure.
const RANK_TOL: f64 = 1e-9;

/// Samples `max |ω(∂_iψ, ∂_jψ)|` over the grid.
pub fn verify_lagrangian(patch: &LagrangianPatch, grid: usize, tol: f64) -> VerificationReport {
    let n = patch.ambient_dim();
    let d = patch.dim();
    let mut max_residual = 0.0f64;
    let mut worst = None;
    let mut immersion_failure = None;
    let samples = patch.samples(grid);
    for u in &samples {
        let j = patch.jacobian(u);
        let cols: Vec<Vec<f64>> = (0..d).map(|i| j.column(i)).collect();
        for a in 0..d {
            for b in a + 1..d {
                let r = math::abs(omega_unchecked(n, &cols[a], &cols[b]));
                if r > max_residual || r.is_nan() {
                    max_residual = if r.is_nan() { f64::INFINITY } else { r };
                    worst = Some(u.clone());
                }
            }
        }
        if immersion_failure.is_none() {
            let sv = j.singular_values();
            let top = sv.first().copied().unwrap_or(0.0);
            let bottom = sv.last().copied().unwrap_or(0.0);
            if !(top > 0.0) || bottom < RANK_TOL * top {
                immersion_failure = Some(u.clone());
            }
        }
    }
    let passed = !samples.is_empty() && immersion_failure.is_none() && max_residual < tol;
    VerificationReport {
        label: patch.label().into(),
        samples: samples.len(),
        max_residual,
        tolerance: tol,
        worst_sample: worst,
        immersion_failure,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn zero_section(n: usize) -> LagrangianPatch {
        LagrangianPatch::new("zero", ParamBox::cube(n, -1.0, 1.0).unwrap(), n, move |u: &[f64]| {
            PhasePoint::new(u.to_vec(), vec![0.0; u.len()]).unwrap()
        })
        .unwrap()
    }

    #[test]
    fn zero_section_is_lagrangian() {
        let r = verify_lagrangian(&zero_section(3), 6, 1e-12);
        assert!(r.passed);
        assert_eq!(r.max_residual, 0.0);
        assert_eq!(r.samples, 216);
    }

    #[test]
    fn graph_of_exact_form() {
        // F = x1^2 x2
        let p = LagrangianPatch::new("dF", ParamBox::cube(2, -1.0, 1.0).unwrap(), 2, |u: &[f64]| {
            PhasePoint::new(u.to_vec(), vec![2.0 * u[0] * u[1], u[0] * u[0]]).unwrap()
        })
        .unwrap();
        let r = verify_lagrangian(&p, 20, 1e-10);
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn non_exact_graph_fails() {
        // y = (0, x1) is the graph of a non-closed form
        let p = LagrangianPatch::new("bad", ParamBox::cube(2, -1.0, 1.0).unwrap(), 2, |u: &[f64]| {
            PhasePoint::new(u.to_vec(), vec![0.0, u[0]]).unwrap()
        })
        .unwrap();
        let r = verify_lagrangian(&p, 5, 1e-8);
        assert!(!r.passed);
        assert!(!r.is_immersion_failure());
        assert!((r.max_residual - 1.0).abs() < 1e-8);
    }

    #[test]
    fn rank_drop_is_an_immersion_failure() {
        let p = LagrangianPatch::new("fold", ParamBox::cube(2, -1.0, 1.0).unwrap(), 2, |u: &[f64]| {
            PhasePoint::new(vec![u[0], 0.0], vec![0.0, 0.0]).unwrap()
        })
        .unwrap();
        let r = verify_lagrangian(&p, 4, 1e-8);
        assert!(r.is_immersion_failure());
        assert!(!r.passed);
    }

    #[test]
    fn too_many_parameters_rejected() {
        let b = ParamBox::cube(3, 0.0, 1.0).unwrap();
        assert!(LagrangianPatch::new("x", b, 2, |_u: &[f64]| PhasePoint::origin(2)).is_err());
    }

    #[test]
    fn predicate_filters_samples() {
        let p = zero_section(2).with_predicate(|u: &[f64]| u[0] > 0.0);
        assert_eq!(p.samples(4).len(), 8);
    }

    proptest! {
        #[test]
        fn graphs_of_random_cubics_pass(c in proptest::collection::vec(-2.0..2.0f64, 10)) {
            // F(x1,x2,x3) with random quadratic and cubic terms, gradient by hand
            let c = Arc::new(c);
            let cc = c.clone();
            let grad = move |x: &[f64]| -> Vec<f64> {
                let c = &cc;
                vec![
                    2.0 * c[0] * x[0] + c[3] * x[1] + 3.0 * c[6] * x[0] * x[0] + c[9] * x[1] * x[2],
                    2.0 * c[1] * x[1] + c[3] * x[0] + c[4] * x[2] + 3.0 * c[7] * x[1] * x[1] + c[9] * x[0] * x[2],
                    2.0 * c[2] * x[2] + c[4] * x[1] + c[5] + 3.0 * c[8] * x[2] * x[2] + c[9] * x[0] * x[1],
                ]
            };
            let p = LagrangianPatch::new("poly", ParamBox::cube(3, -1.0, 1.0).unwrap(), 3, move |u: &[f64]| {
                PhasePoint::new(u.to_vec(), grad(u)).unwrap()
            }).unwrap();
            let r = verify_lagrangian(&p, 5, 1e-8);
            prop_assert!(r.passed, "{:?}", r);
        }
    }
}
