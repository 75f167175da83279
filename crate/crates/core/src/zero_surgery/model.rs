use alloc::vec::Vec;

use crate::linalg::{math, Mat};
use crate::profile::{smootherstep_integral, Jet, StepProfile};
use crate::symplectic::{LagrangianPatch, ParamBox, PhasePoint, PlanarCurve};
use crate::{Error, Result};

/// Sphere angles stay this far from the coordinate poles.
const POLE_MARGIN: f64 = 1e-3;

/// The curve `γ(t) = (a(t), b(t))` of the surgery profile: `(t, 0)` for
/// `t <= -κ`, `(0, t)` for `t >= κ`, and strictly inside the second
/// quadrant in between.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SurgeryCurve {
    kappa: f64,
}

impl SurgeryCurve {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "kappa",
                reason: "need kappa > 0".into(),
            });
        }
        Ok(Self { kappa })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// `h(t) = κ H(t/κ)` with `H(u) = 2 P((u+1)/2)`, `P` the integrated smootherstep.
    fn h(&self, t: f64) -> Jet {
        let u = t / self.kappa;
        let s = (u + 1.0) / 2.0;
        let w = StepProfile::Smootherstep.eval(s);
        Jet {
            value: 2.0 * self.kappa * smootherstep_integral(s),
            d1: w.value,
            d2: w.d1 / (2.0 * self.kappa),
        }
    }

    pub fn a(&self, t: f64) -> Jet {
        let h = self.h(-t);
        Jet {
            value: -h.value,
            d1: h.d1,
            d2: -h.d2,
        }
    }

    pub fn b(&self, t: f64) -> Jet {
        self.h(t)
    }

    pub fn point(&self, t: f64) -> [f64; 2] {
        [self.a(t).value, self.b(t).value]
    }

    pub fn velocity(&self, t: f64) -> [f64; 2] {
        [self.a(t).d1, self.b(t).d1]
    }

    /// Open polyline of `γ` on `[-t_max, t_max]`.
    pub fn sample(&self, t_max: f64, samples: usize) -> PlanarCurve {
        let m = samples.max(2);
        PlanarCurve::open(
            (0..m)
                .map(|i| self.point(-t_max + 2.0 * t_max * i as f64 / (m - 1) as f64))
                .collect(),
        )
    }

    /// Checks the flat ends, the quadrant condition and embeddedness on a sample.
    pub fn verify(&self) -> Result<()> {
        let k = self.kappa;
        let m = 2001;
        for i in 0..m {
            let t = -3.0 * k + 6.0 * k * i as f64 / (m - 1) as f64;
            let [a, b] = self.point(t);
            let bad = if t <= -k {
                math::abs(a - t) > 1e-12 * k || b != 0.0
            } else if t >= k {
                a != 0.0 || math::abs(b - t) > 1e-12 * k
            } else {
                !(a < 0.0 && b > 0.0)
            };
            if bad {
                return Err(Error::ModelViolation(alloc::format!(
                    "surgery curve fails its shape condition at t = {t}"
                )));
            }
        }
        if !self.sample(3.0 * k, 2001).self_crossings().is_empty() {
            return Err(Error::ModelViolation("surgery curve is not embedded".into()));
        }
        Ok(())
    }
}

/// Point of `S^{n-1}` in hyperspherical angles, with its `n x (n-1)` Jacobian.
pub fn sphere_point(angles: &[f64]) -> (Vec<f64>, Mat) {
    let m = angles.len();
    let n = m + 1;
    let sines: Vec<f64> = angles.iter().map(|a| math::sin(*a)).collect();
    let cosines: Vec<f64> = angles.iter().map(|a| math::cos(*a)).collect();
    // x_i = (prod_{l<i} sin φ_l) * (cos φ_i if i < m else 1)
    let tail = |i: usize| if i < m { cosines[i] } else { 1.0 };
    let dtail = |i: usize| if i < m { -sines[i] } else { 0.0 };
    let mut x = alloc::vec![0.0; n];
    let mut jac = Mat::zeros(n, m);
    for i in 0..n {
        let prefix: f64 = sines[..i].iter().product();
        x[i] = prefix * tail(i);
        for j in 0..m {
            jac[(i, j)] = if j < i {
                let others: f64 = (0..i).filter(|&l| l != j).map(|l| sines[l]).product();
                others * cosines[j] * tail(i)
            } else if j == i {
                prefix * dtail(i)
            } else {
                0.0
            };
        }
    }
    (x, jac)
}

/// A linear symplectic map of `T*R^n` acting factorwise by 2x2 matrices of
/// determinant one on the planes `(x_i, y_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitSymplecticMap {
    blocks: Vec<[[f64; 2]; 2]>,
}

impl SplitSymplecticMap {
    pub fn identity(n: usize) -> Self {
        Self {
            blocks: alloc::vec![[[1.0, 0.0], [0.0, 1.0]]; n],
        }
    }

    pub fn new(blocks: Vec<[[f64; 2]; 2]>) -> Result<Self> {
        for (i, m) in blocks.iter().enumerate() {
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            if math::abs(det - 1.0) > 1e-12 {
                return Err(Error::ModelViolation(alloc::format!(
                    "factor {i} has determinant {det}, not 1"
                )));
            }
        }
        Ok(Self { blocks })
    }

    pub fn dim(&self) -> usize {
        self.blocks.len()
    }

    pub fn block(&self, i: usize) -> [[f64; 2]; 2] {
        self.blocks[i]
    }

    pub fn apply_factor(&self, i: usize, p: [f64; 2]) -> [f64; 2] {
        let m = &self.blocks[i];
        [m[0][0] * p[0] + m[0][1] * p[1], m[1][0] * p[0] + m[1][1] * p[1]]
    }

    /// Image of `(x, y)`, returned as `(X, Y)`.
    pub fn apply(&self, x: &[f64], y: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut xo = Vec::with_capacity(x.len());
        let mut yo = Vec::with_capacity(x.len());
        for i in 0..x.len() {
            let [a, b] = self.apply_factor(i, [x[i], y[i]]);
            xo.push(a);
            yo.push(b);
        }
        (xo, yo)
    }
}

/// `h_γ: (t, ω) ↦ (a(t) ω, b(t) ω)` on `[-t_max, t_max] x S^{n-1}`.
pub fn surgery_model(curve: &SurgeryCurve, n: usize, t_max: f64) -> Result<LagrangianPatch> {
    transported_model(curve, &SplitSymplecticMap::identity(n), t_max)
}

/// `Φ ∘ h_γ` for a split linear symplectic map `Φ`.
pub fn transported_model(
    curve: &SurgeryCurve,
    map: &SplitSymplecticMap,
    t_max: f64,
) -> Result<LagrangianPatch> {
    let n = map.dim();
    if n < 2 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "the sphere parametrization needs n >= 2".into(),
        });
    }
    if !(t_max >= curve.kappa()) {
        return Err(Error::InvalidParameter {
            name: "t_max",
            reason: "the model must reach the flat ends |t| >= kappa".into(),
        });
    }
    curve.verify()?;
    let mut lo = alloc::vec![-t_max];
    let mut hi = alloc::vec![t_max];
    for j in 0..n - 1 {
        if j + 1 < n - 1 {
            lo.push(POLE_MARGIN);
            hi.push(core::f64::consts::PI - POLE_MARGIN);
        } else {
            lo.push(0.0);
            hi.push(2.0 * core::f64::consts::PI);
        }
    }
    let domain = ParamBox::new(lo, hi)?;
    let (c1, m1) = (*curve, map.clone());
    let (c2, m2) = (*curve, map.clone());
    let patch = LagrangianPatch::new("h_gamma", domain, n, move |p: &[f64]| {
        let (w, _) = sphere_point(&p[1..]);
        let (a, b) = (c1.a(p[0]).value, c1.b(p[0]).value);
        let x: Vec<f64> = w.iter().map(|v| a * v).collect();
        let y: Vec<f64> = w.iter().map(|v| b * v).collect();
        let (xo, yo) = m1.apply(&x, &y);
        PhasePoint::new(xo, yo).expect("matching lengths")
    })?
    .with_jacobian(move |p: &[f64]| {
        let (w, dw) = sphere_point(&p[1..]);
        let (a, b) = (c2.a(p[0]), c2.b(p[0]));
        let mut jac = Mat::zeros(2 * n, n);
        for i in 0..n {
            let [x, y] = m2.apply_factor(i, [a.d1 * w[i], b.d1 * w[i]]);
            jac[(i, 0)] = x;
            jac[(n + i, 0)] = y;
            for j in 0..n - 1 {
                let [x, y] = m2.apply_factor(i, [a.value * dw[(i, j)], b.value * dw[(i, j)]]);
                jac[(i, j + 1)] = x;
                jac[(n + i, j + 1)] = y;
            }
        }
        jac
    });
    Ok(patch)
}
