//! Monotone step profiles `S: R -> [0, 1]` with `S = 0` for `t <= 0` and
//! `S = 1` for `t >= 1`, evaluated together with their first two derivatives.

use crate::linalg::math::exp;

/// Value and first two derivatives of a scalar function at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub const fn constant(value: f64) -> Self {
        Self {
            value,
            d1: 0.0,
            d2: 0.0,
        }
    }

    /// Jet of `t -> scale * self(t)`.
    pub fn scaled(self, scale: f64) -> Self {
        Self {
            value: self.value * scale,
            d1: self.d1 * scale,
            d2: self.d2 * scale,
        }
    }

    /// Jet of `x -> self((x - x0) / width)` at the corresponding `x`.
    pub fn rescaled_argument(self, width: f64) -> Self {
        Self {
            value: self.value,
            d1: self.d1 / width,
            d2: self.d2 / (width * width),
        }
    }
}

/// Named step-profile shapes.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum StepProfile {
    /// Quintic `6t^5 - 15t^4 + 10t^3`; `C^2` at the seams, derivative
    /// vanishing to second order there.
    Smootherstep,
    /// `e^{-1/t} / (e^{-1/t} + e^{-1/(1-t)})`; `C^∞` and flat at the seams.
    FlatExp,
    /// Nearly linear step: slope `1/(1 - ramp)` on `[ramp, 1 - ramp]`,
    /// smootherstep-shaped slope ramps of width `ramp` at both ends. Its
    /// maximal slope is only slightly above the average slope 1.
    PlateauRamp { ramp: f64 },
}

impl StepProfile {
    pub fn eval(&self, t: f64) -> Jet {
        if t <= 0.0 {
            return Jet::constant(0.0);
        }
        if t >= 1.0 {
            return Jet::constant(1.0);
        }
        match *self {
            StepProfile::Smootherstep => smootherstep(t),
            StepProfile::FlatExp => flat_exp(t),
            StepProfile::PlateauRamp { ramp } => plateau_ramp(t, ramp),
        }
    }

    /// Supremum of `S'` (attained or approached on `(0, 1)`).
    pub fn max_slope(&self) -> f64 {
        match *self {
            StepProfile::Smootherstep => 1.875,
            StepProfile::FlatExp => 2.0,
            StepProfile::PlateauRamp { ramp } => 1.0 / (1.0 - ramp),
        }
    }

    /// Checks the internal shape parameters.
    pub fn validate(&self) -> Result<(), &'static str> {
        match *self {
            StepProfile::PlateauRamp { ramp } if !(ramp > 0.0 && ramp <= 0.5) => {
                Err("plateau ramp width must lie in (0, 0.5]")
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            StepProfile::Smootherstep => "smootherstep",
            StepProfile::FlatExp => "flat-exp",
            StepProfile::PlateauRamp { .. } => "plateau-ramp",
        }
    }
}

fn smootherstep(t: f64) -> Jet {
    let t2 = t * t;
    let u = 1.0 - t;
    Jet {
        value: t2 * t * (10.0 - 15.0 * t + 6.0 * t2),
        d1: 30.0 * t2 * u * u,
        d2: 60.0 * t * u * (1.0 - 2.0 * t),
    }
}

/// `∫_0^t smootherstep` extended linearly beyond 1, zero below 0.
pub fn smootherstep_integral(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        0.5 + (t - 1.0)
    } else {
        let t4 = t * t * t * t;
        t4 * (2.5 - 3.0 * t + t * t)
    }
}

fn flat_exp(t: f64) -> Jet {
    let u = 1.0 - t;
    // S = 1 / (1 + e^h), h = 1/t - 1/u.
    let h = 1.0 / t - 1.0 / u;
    let s = 1.0 / (1.0 + exp(h));
    let q = 1.0 / (t * t) + 1.0 / (u * u);
    let dq = -2.0 / (t * t * t) + 2.0 / (u * u * u);
    let s1m = s * (1.0 - s);
    let d1 = s1m * q;
    let d2 = d1 * (1.0 - 2.0 * s) * q + s1m * dq;
    Jet { value: s, d1, d2 }
}

fn plateau_ramp(t: f64, ramp: f64) -> Jet {
    let c = 1.0 / (1.0 - ramp);
    if t > 0.5 {
        let m = plateau_ramp(1.0 - t, ramp);
        return Jet {
            value: 1.0 - m.value,
            d1: m.d1,
            d2: -m.d2,
        };
    }
    if t >= ramp {
        return Jet {
            value: c * (0.5 * ramp + (t - ramp)),
            d1: c,
            d2: 0.0,
        };
    }
    let u = t / ramp;
    let m = smootherstep(u);
    Jet {
        value: c * ramp * smootherstep_integral(u),
        d1: c * m.value,
        d2: c * m.d1 / ramp,
    }
}
