use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::linalg::math;
use crate::{Error, Result};

/// A polyline in one `T*R` factor, optionally closed (first point repeated last).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PlanarCurve {
    points: Vec<[f64; 2]>,
    closed: bool,
}

impl PlanarCurve {
    pub fn open(points: Vec<[f64; 2]>) -> Self {
        Self {
            points,
            closed: false,
        }
    }

    /// Closes the polyline, appending the first point if needed.
    pub fn closed(mut points: Vec<[f64; 2]>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::InvalidParameter {
                name: "points",
                reason: "a closed curve needs at least three points".into(),
            });
        }
        if points.first() != points.last() {
            let p = points[0];
            points.push(p);
        }
        Ok(Self {
            points,
            closed: true,
        })
    }

    /// Samples `f` at `samples` points of `[0, period)` and closes the curve.
    pub fn sample_closed(samples: usize, period: f64, f: impl Fn(f64) -> [f64; 2]) -> Result<Self> {
        let pts = (0..samples)
            .map(|i| f(period * i as f64 / samples as f64))
            .collect();
        Self::closed(pts)
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        Self {
            points,
            closed: self.closed,
        }
    }

    pub fn map(&self, f: impl Fn([f64; 2]) -> [f64; 2]) -> Self {
        Self {
            points: self.points.iter().map(|p| f(*p)).collect(),
            closed: self.closed,
        }
    }

    pub fn length(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| math::hypot(w[1][0] - w[0][0], w[1][1] - w[0][1]))
            .sum()
    }

    /// Signed shoelace area, counterclockwise positive.
    pub fn enclosed_area(&self) -> Result<f64> {
        if !self.closed {
            return Err(Error::OpenCurve);
        }
        let s: f64 = self
            .points
            .windows(2)
            .map(|w| w[0][0] * w[1][1] - w[1][0] * w[0][1])
            .sum();
        Ok(0.5 * s)
    }

    /// Winding number about `p` by angle summation.
    pub fn winding_number(&self, p: [f64; 2]) -> Result<i64> {
        if !self.closed {
            return Err(Error::OpenCurve);
        }
        let mut total = 0.0;
        for w in self.points.windows(2) {
            let a = [w[0][0] - p[0], w[0][1] - p[1]];
            let b = [w[1][0] - p[0], w[1][1] - p[1]];
            if (a[0] == 0.0 && a[1] == 0.0) || (b[0] == 0.0 && b[1] == 0.0) {
                return Err(Error::Degenerate("curve passes through the base point".into()));
            }
            total += math::atan2(a[0] * b[1] - a[1] * b[0], a[0] * b[0] + a[1] * b[1]);
        }
        Ok(math::round(total / (2.0 * PI)) as i64)
    }

    /// Transverse self-intersections between non-adjacent segments.
    pub fn self_crossings(&self) -> Vec<[f64; 2]> {
        let segs = self.points.len().saturating_sub(1);
        let mut out = Vec::new();
        let mut order: Vec<usize> = (0..segs).collect();
        let lo = |i: usize| self.points[i][0].min(self.points[i + 1][0]);
        let hi = |i: usize| self.points[i][0].max(self.points[i + 1][0]);
        order.sort_by(|&a, &b| lo(a).total_cmp(&lo(b)));
        for (k, &i) in order.iter().enumerate() {
            for &j in &order[k + 1..] {
                if lo(j) > hi(i) {
                    break;
                }
                let (a, b) = if i < j { (i, j) } else { (j, i) };
                if b == a + 1 || (self.closed && a == 0 && b == segs - 1) {
                    continue;
                }
                if let Some(x) = segment_intersection(
                    self.points[a],
                    self.points[a + 1],
                    self.points[b],
                    self.points[b + 1],
                ) {
                    out.push(x);
                }
            }
        }
        out
    }

    /// Intersection points with another curve.
    pub fn crossings_with(&self, other: &PlanarCurve) -> Vec<[f64; 2]> {
        let mut out = Vec::new();
        for a in self.points.windows(2) {
            for b in other.points.windows(2) {
                if let Some(x) = segment_intersection(a[0], a[1], b[0], b[1]) {
                    out.push(x);
                }
            }
        }
        out
    }
}

/// Intersection of closed segments `[p1, p2]` and `[q1, q2]`, if transverse.
pub fn segment_intersection(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> Option<[f64; 2]> {
    let r = [p2[0] - p1[0], p2[1] - p1[1]];
    let s = [q2[0] - q1[0], q2[1] - q1[1]];
    let denom = r[0] * s[1] - r[1] * s[0];
    if denom == 0.0 {
        return None;
    }
    let qp = [q1[0] - p1[0], q1[1] - p1[1]];
    let t = (qp[0] * s[1] - qp[1] * s[0]) / denom;
    let u = (qp[0] * r[1] - qp[1] * r[0]) / denom;
    if (0.0..1.0).contains(&t) && (0.0..1.0).contains(&u) {
        Some([p1[0] + t * r[0], p1[1] + t * r[1]])
    } else {
        None
    }
}

fn point_segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = if len2 > 0.0 {
        (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    math::hypot(p[0] - a[0] - t * d[0], p[1] - a[1] - t * d[1])
}

/// Symmetric Hausdorff distance between two finite point sets.
pub fn hausdorff_distance(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    let one_sided = |a: &[[f64; 2]], b: &[[f64; 2]]| {
        a.iter()
            .map(|p| {
                b.iter()
                    .map(|q| math::hypot(p[0] - q[0], p[1] - q[1]))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    one_sided(a, b).max(one_sided(b, a))
}

/// Hausdorff distance measured from vertices to the other polyline's segments.
pub fn polyline_hausdorff(a: &PlanarCurve, b: &PlanarCurve) -> f64 {
    let one_sided = |a: &PlanarCurve, b: &PlanarCurve| {
        a.points
            .iter()
            .map(|p| {
                if b.points.len() == 1 {
                    return math::hypot(p[0] - b.points[0][0], p[1] - b.points[0][1]);
                }
                b.points
                    .windows(2)
                    .map(|w| point_segment_distance(*p, w[0], w[1]))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    one_sided(a, b).max(one_sided(b, a))
}

/// Periodic cubic spline through equally spaced samples on `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedSpline {
    knots: Vec<[f64; 2]>,
    second: Vec<[f64; 2]>,
}

impl ClosedSpline {
    pub fn new(knots: Vec<[f64; 2]>) -> Result<Self> {
        let m = knots.len();
        if m < 4 {
            return Err(Error::InvalidParameter {
                name: "knots",
                reason: "a periodic spline needs at least four knots".into(),
            });
        }
        let h = 2.0 * PI / m as f64;
        let mut second = alloc::vec![[0.0; 2]; m];
        for c in 0..2 {
            let rhs: Vec<f64> = (0..m)
                .map(|j| {
                    let prev = knots[(j + m - 1) % m][c];
                    let next = knots[(j + 1) % m][c];
                    6.0 * (next - 2.0 * knots[j][c] + prev) / (h * h)
                })
                .collect();
            let sol = solve_cyclic(m, &rhs);
            for j in 0..m {
                second[j][c] = sol[j];
            }
        }
        Ok(Self { knots, second })
    }

    /// Position and derivative at parameter `s` (any real, taken mod 2π).
    pub fn eval(&self, s: f64) -> ([f64; 2], [f64; 2]) {
        let m = self.knots.len();
        let h = 2.0 * PI / m as f64;
        let mut t = s % (2.0 * PI);
        if t < 0.0 {
            t += 2.0 * PI;
        }
        let j = ((t / h) as usize).min(m - 1);
        let a = (t - j as f64 * h) / h;
        let b = 1.0 - a;
        let k = (j + 1) % m;
        let mut p = [0.0; 2];
        let mut d = [0.0; 2];
        for c in 0..2 {
            let (y0, y1) = (self.knots[j][c], self.knots[k][c]);
            let (m0, m1) = (self.second[j][c], self.second[k][c]);
            p[c] = b * y0 + a * y1 + ((b * b * b - b) * m0 + (a * a * a - a) * m1) * h * h / 6.0;
            d[c] = (y1 - y0) / h + ((1.0 - 3.0 * b * b) * m0 + (3.0 * a * a - 1.0) * m1) * h / 6.0;
        }
        (p, d)
    }

    pub fn knots(&self) -> &[[f64; 2]] {
        &self.knots
    }
}

/// Solves the cyclic system `x_{j-1} + 4 x_j + x_{j+1} = r_j` (Sherman-Morrison).
fn solve_cyclic(m: usize, rhs: &[f64]) -> Vec<f64> {
    // A = T + u v^T, with T tridiagonal and corners absorbed into u v^T
    let gamma = -4.0;
    let mut diag = alloc::vec![4.0; m];
    diag[0] -= gamma;
    diag[m - 1] -= 1.0 / gamma;
    let thomas = |d: &[f64], r: &[f64]| -> Vec<f64> {
        let mut c = alloc::vec![0.0; m];
        let mut x = alloc::vec![0.0; m];
        c[0] = 1.0 / d[0];
        x[0] = r[0] / d[0];
        for i in 1..m {
            let den = d[i] - c[i - 1];
            c[i] = 1.0 / den;
            x[i] = (r[i] - x[i - 1]) / den;
        }
        for i in (0..m - 1).rev() {
            x[i] -= c[i] * x[i + 1];
        }
        x
    };
    let y = thomas(&diag, rhs);
    let mut u = alloc::vec![0.0; m];
    u[0] = gamma;
    u[m - 1] = 1.0;
    let z = thomas(&diag, &u);
    let vy = y[0] + y[m - 1] / gamma;
    let vz = z[0] + z[m - 1] / gamma;
    let f = vy / (1.0 + vz);
    y.iter().zip(&z).map(|(a, b)| a - f * b).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn circle(m: usize) -> PlanarCurve {
        PlanarCurve::sample_closed(m, 2.0 * PI, |t| [t.cos(), t.sin()]).unwrap()
    }

    #[test]
    fn circle_area_and_orientation() {
        let c = circle(10_000);
        let a = c.enclosed_area().unwrap();
        assert!((a - PI).abs() / PI < 1e-6);
        assert!((c.reversed().enclosed_area().unwrap() + PI).abs() / PI < 1e-6);
        assert_eq!(c.winding_number([0.0, 0.0]).unwrap(), 1);
        assert_eq!(c.reversed().winding_number([0.1, 0.2]).unwrap(), -1);
        assert_eq!(c.winding_number([3.0, 0.0]).unwrap(), 0);
    }

    #[test]
    fn open_curves_have_no_area() {
        let c = PlanarCurve::open(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]]);
        assert!(matches!(c.enclosed_area(), Err(Error::OpenCurve)));
    }

    #[test]
    fn teardrop_area() {
        // the lobe x >= 0 between the graphs y = ±3 sqrt(eps - x^2) x
        let eps: f64 = 0.04;
        let r = eps.sqrt();
        let c = PlanarCurve::sample_closed(20_000, PI, |t| [r * t.sin(), -1.5 * eps * (2.0 * t).sin()])
            .unwrap();
        let a = c.enclosed_area().unwrap().abs();
        assert!((a - 0.016).abs() < 1e-6, "{a}");
    }

    #[test]
    fn figure_eight_crossing() {
        let c = PlanarCurve::sample_closed(2000, 2.0 * PI, |t| {
            let t = t + 0.1234;
            [t.sin(), (2.0 * t).sin()]
        })
        .unwrap();
        let x = c.self_crossings();
        assert_eq!(x.len(), 1, "{x:?}");
        assert!(x[0][0].abs() < 1e-5 && x[0][1].abs() < 1e-5);
        assert!(circle(500).self_crossings().is_empty());
    }

    #[test]
    fn segments() {
        assert_eq!(
            segment_intersection([-1.0, 0.0], [1.0, 0.0], [0.0, -1.0], [0.0, 1.0]),
            Some([0.0, 0.0])
        );
        assert_eq!(segment_intersection([0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]), None);
    }

    #[test]
    fn hausdorff_examples() {
        let a = [[0.0, 0.0], [1.0, 0.0]];
        let b = [[0.0, 0.5], [1.0, 0.0]];
        assert!((hausdorff_distance(&a, &b) - 0.5).abs() < 1e-15);
        let pa = PlanarCurve::open(vec![[0.0, 0.0], [2.0, 0.0]]);
        let pb = PlanarCurve::open(vec![[0.0, 0.1], [1.0, 0.1], [2.0, 0.1]]);
        assert!((polyline_hausdorff(&pa, &pb) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn spline_reproduces_circle() {
        let m = 256;
        let knots = (0..m)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / m as f64;
                [t.cos(), t.sin()]
            })
            .collect();
        let s = ClosedSpline::new(knots).unwrap();
        for i in 0..97 {
            let t = 0.0713 * i as f64;
            let (p, d) = s.eval(t);
            assert!((p[0] - t.cos()).abs() < 1e-8 && (p[1] - t.sin()).abs() < 1e-8);
            assert!((d[0] + t.sin()).abs() < 1e-5 && (d[1] - t.cos()).abs() < 1e-5);
        }
    }

    proptest! {
        #[test]
        fn area_converges_second_order(a in 0.5..2.0f64, b in 0.5..2.0f64) {
            let exact = PI * a * b;
            let err = |m: usize| {
                let c = PlanarCurve::sample_closed(m, 2.0 * PI, |t| [a * t.cos(), b * t.sin()]).unwrap();
                (c.enclosed_area().unwrap() - exact).abs()
            };
            let (e1, e2) = (err(200), err(400));
            // halving the spacing quarters the error
            prop_assert!(e2 < e1 / 3.5, "{} {}", e1, e2);
        }
    }
}
