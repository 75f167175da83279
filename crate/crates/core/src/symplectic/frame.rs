use alloc::vec::Vec;

use crate::linalg::{complex_det, math, Mat};
use crate::{Error, Result};

const LAGRANGIAN_TOL: f64 = 1e-8;
const RANK_TOL: f64 = 1e-10;

/// A Lagrangian plane in `T*R^n` spanned by the columns of `[X; Y]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianFrame {
    x: Mat,
    y: Mat,
}

impl LagrangianFrame {
    pub fn new(x: Mat, y: Mat) -> Result<Self> {
        let n = x.rows();
        if n == 0 || x.cols() != n || y.rows() != n || y.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: if x.cols() != n { x.cols() } else { y.rows().max(y.cols()) },
            });
        }
        let frame = Self { x, y };
        let stacked = frame.stacked();
        let sv = stacked.singular_values();
        if !(sv[0] > 0.0) || sv[n - 1] < RANK_TOL * sv[0] {
            return Err(Error::Degenerate("frame columns do not span an n-plane".into()));
        }
        let scale = sv[0] * sv[0];
        let defect = frame.lagrangian_defect();
        if defect > LAGRANGIAN_TOL * scale {
            return Err(Error::ModelViolation(alloc::format!(
                "frame is not Lagrangian: |X^T Y - Y^T X| = {defect:e}"
            )));
        }
        Ok(frame)
    }

    /// Builds a frame from `n` column vectors of length `2n` in `(x, y)` layout.
    pub fn from_columns(cols: &[Vec<f64>]) -> Result<Self> {
        let n = cols.len();
        if let Some(c) = cols.iter().find(|c| c.len() != 2 * n) {
            return Err(Error::DimensionMismatch {
                expected: 2 * n,
                got: c.len(),
            });
        }
        let m = Mat::from_columns(2 * n, cols);
        Self::new(m.block(0, 0, n, n), m.block(n, 0, n, n))
    }

    /// `R^n x {0}`.
    pub fn horizontal(n: usize) -> Self {
        Self {
            x: Mat::identity(n),
            y: Mat::zeros(n, n),
        }
    }

    /// `{0} x R^n`.
    pub fn vertical(n: usize) -> Self {
        Self {
            x: Mat::zeros(n, n),
            y: Mat::identity(n),
        }
    }

    /// The line spanned by `cos θ ∂x + sin θ ∂y` in `T*R`.
    pub fn line(theta: f64) -> Self {
        Self {
            x: Mat::from_fn(1, 1, |_, _| math::cos(theta)),
            y: Mat::from_fn(1, 1, |_, _| math::sin(theta)),
        }
    }

    pub fn dim(&self) -> usize {
        self.x.rows()
    }

    pub fn x(&self) -> &Mat {
        &self.x
    }

    pub fn y(&self) -> &Mat {
        &self.y
    }

    pub fn stacked(&self) -> Mat {
        self.x.vstack(&self.y)
    }

    pub fn lagrangian_defect(&self) -> f64 {
        let a = self.x.transpose().matmul(&self.y);
        let b = self.y.transpose().matmul(&self.x);
        let mut m = 0.0f64;
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                m = m.max(math::abs(a[(i, j)] - b[(i, j)]));
            }
        }
        m
    }

    /// Block-diagonal sum in `T*R^(n+m)`.
    pub fn direct_sum(&self, other: &LagrangianFrame) -> LagrangianFrame {
        let n = self.dim();
        let m = other.dim();
        let blockdiag = |a: &Mat, b: &Mat| {
            Mat::from_fn(n + m, n + m, |i, j| match (i < n, j < n) {
                (true, true) => a[(i, j)],
                (false, false) => b[(i - n, j - n)],
                _ => 0.0,
            })
        };
        LagrangianFrame {
            x: blockdiag(&self.x, &other.x),
            y: blockdiag(&self.y, &other.y),
        }
    }

    /// Phase of `det(X + iY)^2`; depends only on the plane.
    pub fn squared_det_phase(&self) -> f64 {
        let d = complex_det(&self.x, &self.y);
        (d * d).arg()
    }

    /// True when both frames span the same plane.
    pub fn same_plane(&self, other: &LagrangianFrame, tol: f64) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let n = self.dim();
        let joined = self.stacked().hstack(&other.stacked());
        let sv = joined.singular_values();
        sv[n] <= tol * sv[0].max(1.0)
    }
}

/// Smallest singular value of `[[X_a; Y_a] | [X_b; Y_b]]`.
pub fn transversality_gap(a: &LagrangianFrame, b: &LagrangianFrame) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(a.stacked().hstack(&b.stacked()).min_singular_value())
}

/// A closed loop of Lagrangian planes, sampled densely.
#[derive(Debug, Clone)]
pub struct FrameLoop {
    frames: Vec<LagrangianFrame>,
}

impl FrameLoop {
    pub fn new(frames: Vec<LagrangianFrame>) -> Result<Self> {
        if frames.len() < 2 {
            return Err(Error::InvalidParameter {
                name: "frames",
                reason: "a loop needs at least two frames".into(),
            });
        }
        let n = frames[0].dim();
        if let Some(f) = frames.iter().find(|f| f.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: f.dim(),
            });
        }
        if !frames[0].same_plane(&frames[frames.len() - 1], 1e-7) {
            return Err(Error::OpenCurve);
        }
        Ok(Self { frames })
    }

    /// Samples `f` on `[a, b]` at `samples + 1` points; `f(a)` and `f(b)` must span the same plane.
    pub fn sample(
        a: f64,
        b: f64,
        samples: usize,
        mut f: impl FnMut(f64) -> Result<LagrangianFrame>,
    ) -> Result<Self> {
        let m = samples.max(1);
        let frames = (0..=m)
            .map(|i| f(a + (b - a) * i as f64 / m as f64))
            .collect::<Result<Vec<_>>>()?;
        Self::new(frames)
    }

    pub fn frames(&self) -> &[LagrangianFrame] {
        &self.frames
    }

    pub fn dim(&self) -> usize {
        self.frames[0].dim()
    }

    pub fn reversed(&self) -> Self {
        let mut frames = self.frames.clone();
        frames.reverse();
        Self { frames }
    }

    /// Pointwise direct sum; both loops must have the same number of samples.
    pub fn direct_sum(&self, other: &FrameLoop) -> Result<Self> {
        if self.frames.len() != other.frames.len() {
            return Err(Error::DimensionMismatch {
                expected: self.frames.len(),
                got: other.frames.len(),
            });
        }
        Ok(Self {
            frames: self
                .frames
                .iter()
                .zip(&other.frames)
                .map(|(a, b)| a.direct_sum(b))
                .collect(),
        })
    }
}

fn wrap_pi(mut a: f64) -> f64 {
    let tau = 2.0 * core::f64::consts::PI;
    a %= tau;
    if a > core::f64::consts::PI {
        a -= tau;
    } else if a <= -core::f64::consts::PI {
        a += tau;
    }
    a
}

/// Winding number of `det(X + iY)^2 / |det(X + iY)|^2` along the loop.
pub fn maslov_index(lp: &FrameLoop) -> Result<i64> {
    let phases: Vec<f64> = lp.frames.iter().map(|f| f.squared_det_phase()).collect();
    let mut total = 0.0;
    for (i, w) in phases.windows(2).enumerate() {
        let step = wrap_pi(w[1] - w[0]);
        if math::abs(step) >= core::f64::consts::FRAC_PI_2 {
            return Err(Error::RefinementNeeded { index: i, jump: step });
        }
        total += step;
    }
    let turns = total / (2.0 * core::f64::consts::PI);
    let k = math::round(turns);
    if math::abs(turns - k) > 1e-6 {
        return Err(Error::ModelViolation(alloc::format!(
            "accumulated phase {turns} is not an integer number of turns"
        )));
    }
    Ok(k as i64)
}
