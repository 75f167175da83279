use alloc::vec::Vec;

use super::patch::LagrangianPatch;
use super::phase::PhasePoint;
use crate::linalg::{dist, math, norm, Mat};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DoublePointSearch {
    /// Samples per parameter axis.
    pub grid: usize,
    /// Residual `|ψ_a(u) - ψ_b(v)|` accepted after refinement.
    pub tol: f64,
    pub max_iterations: usize,
    /// Multiplier on the local sample spacing used as the coarse threshold.
    pub candidate_factor: f64,
}

impl Default for DoublePointSearch {
    fn default() -> Self {
        Self {
            grid: 24,
            tol: 1e-10,
            max_iterations: 200,
            candidate_factor: 1.25,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum RefinementStatus {
    Refined,
    /// Refinement stalled inside the domain above tolerance.
    Unrefined,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DoublePoint {
    pub param_a: Vec<f64>,
    pub param_b: Vec<f64>,
    pub point: PhasePoint,
    pub residual: f64,
    pub status: RefinementStatus,
}

enum Outcome {
    Kept(DoublePoint),
    /// Refinement ran into the domain boundary.
    Escaped,
    /// Converged to a local minimum of the distance that is not a meeting point.
    NearMiss,
}

/// Points where the images of two patches meet: grid scan, then damped
/// Gauss-Newton refinement in the joint parameters.
pub fn find_double_points(
    a: &LagrangianPatch,
    b: &LagrangianPatch,
    search: &DoublePointSearch,
) -> Result<Vec<DoublePoint>> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: a.ambient_dim(),
            got: b.ambient_dim(),
        });
    }
    if !(search.tol > 0.0) || search.grid == 0 {
        return Err(Error::InvalidParameter {
            name: "search",
            reason: "need tol > 0 and grid >= 1".into(),
        });
    }
    let sa = sample(a, search.grid);
    let sb = sample(b, search.grid);
    if sa.is_empty() || sb.is_empty() {
        return Ok(Vec::new());
    }
    let half = 0.5 * search.candidate_factor;
    let cap = SPACING_CAP * median_spacing(&sa).max(median_spacing(&sb));
    let tree = KdTree::build(
        sb.iter().map(|s| s.image.clone()).collect(),
        sb.iter().map(|s| half * s.spacing.min(cap)).collect(),
    );
    let mut found: Vec<DoublePoint> = Vec::new();
    for s in &sa {
        let Some(j) = tree.nearest_within(&s.image, half * s.spacing.min(cap)) else {
            continue;
        };
        if !promising(a, b, s, &sb[j], search.grid) {
            continue;
        }
        if let Outcome::Kept(p) = refine(a, b, &s.param, &sb[j].param, search) {
            merge(&mut found, p, 10.0 * search.tol);
        }
    }
    Ok(found)
}

/// Local spacings are clipped at this multiple of the median; larger values
/// only occur where the parametrization degenerates.
const SPACING_CAP: f64 = 4.0;

fn median_spacing(s: &[Sample]) -> f64 {
    let mut v: Vec<f64> = s.iter().map(|s| s.spacing).collect();
    v.sort_unstable_by(f64::total_cmp);
    v[v.len() / 2]
}

struct Sample {
    param: Vec<f64>,
    image: Vec<f64>,
    spacing: f64,
}

fn sample(p: &LagrangianPatch, grid: usize) -> Vec<Sample> {
    let steps: Vec<f64> = (0..p.dim())
        .map(|i| p.domain().side(i) / grid as f64)
        .collect();
    p.samples(grid)
        .into_iter()
        .map(|u| {
            let j = p.jacobian(&u);
            let spacing = math::sqrt(
                (0..p.dim())
                    .map(|k| {
                        let c = norm(&j.column(k)) * steps[k];
                        c * c
                    })
                    .sum(),
            );
            Sample {
                image: p.eval_flat(&u),
                param: u,
                spacing,
            }
        })
        .collect()
}

/// One Gauss-Newton step from the sample pair must land inside both domains
/// and within a few cells of the start.
fn promising(a: &LagrangianPatch, b: &LagrangianPatch, sa: &Sample, sb: &Sample, grid: usize) -> bool {
    let da = a.dim();
    let j = a.jacobian(&sa.param).hstack(&b.jacobian(&sb.param).scale(-1.0));
    let r: Vec<f64> = sa.image.iter().zip(&sb.image).map(|(x, y)| x - y).collect();
    let jt = j.transpose();
    let mut normal = jt.matmul(&j);
    let dim = normal.rows();
    let scale = (0..dim).map(|i| normal[(i, i)]).fold(0.0, f64::max).max(1e-300);
    for i in 0..dim {
        normal[(i, i)] += 1e-10 * scale;
    }
    let Some(step) = normal.solve(&jt.mul_vec(&r)) else {
        return true;
    };
    let trial: Vec<f64> = sa.param.iter().chain(&sb.param).zip(&step).map(|(x, s)| x - s).collect();
    if !a.contains(&trial[..da]) || !b.contains(&trial[da..]) {
        return false;
    }
    let cells = |p: &LagrangianPatch, off: usize| {
        (0..p.dim()).all(|k| math::abs(step[off + k]) <= 3.0 * p.domain().side(k) / grid as f64)
    };
    cells(a, 0) && cells(b, da)
}

/// Relative size of `J^T r` below which a residual counts as a local minimum.
const STATIONARY: f64 = 1e-3;
const MAX_BOUNDARY_HITS: usize = 4;

fn refine(
    a: &LagrangianPatch,
    b: &LagrangianPatch,
    u0: &[f64],
    v0: &[f64],
    search: &DoublePointSearch,
) -> Outcome {
    let da = a.dim();
    let db = b.dim();
    let residual = |z: &[f64]| -> Vec<f64> {
        let pa = a.eval_flat(&z[..da]);
        let pb = b.eval_flat(&z[da..]);
        pa.iter().zip(&pb).map(|(x, y)| x - y).collect()
    };
    let mut z: Vec<f64> = u0.iter().chain(v0).copied().collect();
    let mut r = residual(&z);
    let mut rn = norm(&r);
    let mut lambda = 1e-3;
    let mut boundary_hits = 0usize;
    for _ in 0..search.max_iterations {
        if rn == 0.0 {
            break;
        }
        let ja = a.jacobian(&z[..da]);
        let jb = b.jacobian(&z[da..]).scale(-1.0);
        let j = ja.hstack(&jb);
        let jt = j.transpose();
        let normal = jt.matmul(&j);
        let g = jt.mul_vec(&r);
        let dim = da + db;
        let trace: f64 = (0..dim).map(|i| normal[(i, i)]).sum();
        if rn > search.tol && norm(&g) <= STATIONARY * math::sqrt(trace) * rn {
            return Outcome::NearMiss;
        }
        let scale = (0..dim).map(|i| normal[(i, i)]).fold(0.0, f64::max).max(1e-300);
        let mut accepted = false;
        let mut blocked = false;
        while lambda < 1e12 {
            let damped = Mat::from_fn(dim, dim, |i, k| {
                if i == k {
                    normal[(i, i)] + lambda * (normal[(i, i)] + 1e-12 * scale)
                } else {
                    normal[(i, k)]
                }
            });
            let Some(step) = damped.solve(&g) else {
                lambda *= 4.0;
                continue;
            };
            let trial: Vec<f64> = z.iter().zip(&step).map(|(x, s)| x - s).collect();
            if !a.contains(&trial[..da]) || !b.contains(&trial[da..]) {
                blocked = true;
                lambda *= 4.0;
                continue;
            }
            let rt = residual(&trial);
            let rtn = norm(&rt);
            if rtn < rn {
                let small = norm(&step) <= 1e-13 * (1.0 + norm(&z));
                z = trial;
                r = rt;
                rn = rtn;
                lambda = (lambda / 3.0).max(1e-15);
                accepted = !small;
                break;
            }
            lambda *= 4.0;
        }
        if blocked {
            boundary_hits += 1;
            if boundary_hits >= MAX_BOUNDARY_HITS && rn > search.tol {
                return Outcome::Escaped;
            }
        }
        if !accepted {
            break;
        }
    }
    if rn > search.tol {
        if boundary_hits > 0 {
            return Outcome::Escaped;
        }
        let j = a.jacobian(&z[..da]).hstack(&b.jacobian(&z[da..]).scale(-1.0));
        let g = norm(&j.transpose().mul_vec(&r));
        let trace: f64 = (0..j.cols())
            .map(|c| {
                let v = norm(&j.column(c));
                v * v
            })
            .sum();
        if g <= STATIONARY * math::sqrt(trace) * rn {
            return Outcome::NearMiss;
        }
    }
    Outcome::Kept(DoublePoint {
        point: a.eval(&z[..da]),
        param_a: z[..da].to_vec(),
        param_b: z[da..].to_vec(),
        residual: rn,
        status: if rn <= search.tol {
            RefinementStatus::Refined
        } else {
            RefinementStatus::Unrefined
        },
    })
}

fn merge(found: &mut Vec<DoublePoint>, p: DoublePoint, radius: f64) {
    if let Some(q) = found.iter_mut().find(|q| q.point.distance(&p.point) <= radius) {
        if p.residual < q.residual {
            *q = p;
        }
    } else {
        found.push(p);
    }
}

/// Static k-d tree over points carrying a reach radius each; queries look
/// for the nearest point `p` with `|q - p| <= r_q + reach(p)`.
struct KdTree {
    points: Vec<Vec<f64>>,
    reach: Vec<f64>,
    nodes: Vec<Node>,
    root: Option<usize>,
}

struct Node {
    point: usize,
    axis: usize,
    /// Largest reach in the subtree.
    reach: f64,
    left: Option<usize>,
    right: Option<usize>,
}

impl KdTree {
    fn build(points: Vec<Vec<f64>>, reach: Vec<f64>) -> Self {
        let mut idx: Vec<usize> = (0..points.len()).collect();
        let mut nodes = Vec::with_capacity(points.len());
        let root = Self::build_rec(&points, &reach, &mut idx, &mut nodes);
        Self {
            points,
            reach,
            nodes,
            root,
        }
    }

    fn build_rec(points: &[Vec<f64>], reach: &[f64], idx: &mut [usize], nodes: &mut Vec<Node>) -> Option<usize> {
        if idx.is_empty() {
            return None;
        }
        let dim = points[idx[0]].len();
        let axis = (0..dim)
            .map(|k| {
                let (lo, hi) = idx.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &i| {
                    (l.min(points[i][k]), h.max(points[i][k]))
                });
                (k, hi - lo)
            })
            .fold((0, -1.0), |best, c| if c.1 > best.1 { c } else { best })
            .0;
        idx.sort_unstable_by(|&p, &q| points[p][axis].total_cmp(&points[q][axis]));
        let mid = idx.len() / 2;
        let point = idx[mid];
        let subtree_reach = idx.iter().map(|&i| reach[i]).fold(0.0, f64::max);
        let (l, r) = idx.split_at_mut(mid);
        let left = Self::build_rec(points, reach, l, nodes);
        let right = Self::build_rec(points, reach, &mut r[1..], nodes);
        nodes.push(Node {
            point,
            axis,
            reach: subtree_reach,
            left,
            right,
        });
        Some(nodes.len() - 1)
    }

    fn nearest_within(&self, q: &[f64], radius: f64) -> Option<usize> {
        let mut best = (None, f64::INFINITY);
        let mut off = alloc::vec![0.0; q.len()];
        self.search(self.root, q, radius, 0.0, &mut off, &mut best);
        best.0
    }

    /// `box_d2` is the squared distance from `q` to the node's cell, tracked
    /// incrementally through the per-axis offsets `off`.
    fn search(
        &self,
        node: Option<usize>,
        q: &[f64],
        radius: f64,
        box_d2: f64,
        off: &mut [f64],
        best: &mut (Option<usize>, f64),
    ) {
        let Some(n) = node else { return };
        let node = &self.nodes[n];
        let bound = best.1.min(radius + node.reach);
        if box_d2 > bound * bound {
            return;
        }
        let p = &self.points[node.point];
        let d = dist(p, q);
        if d < best.1 && d <= radius + self.reach[node.point] {
            *best = (Some(node.point), d);
        }
        let diff = q[node.axis] - p[node.axis];
        let (near, far) = if diff < 0.0 {
            (node.left, node.right)
        } else {
            (node.right, node.left)
        };
        self.search(near, q, radius, box_d2, off, best);
        let old = off[node.axis];
        let far_d2 = box_d2 - old * old + diff * diff;
        off[node.axis] = diff;
        self.search(far, q, radius, far_d2, off, best);
        off[node.axis] = old;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::ParamBox;
    use alloc::vec;

    fn section(n: usize, offset: f64) -> LagrangianPatch {
        LagrangianPatch::new("s", ParamBox::cube(n, -1.0, 1.0).unwrap(), n, move |u: &[f64]| {
            PhasePoint::new(u.to_vec(), vec![offset; u.len()]).unwrap()
        })
        .unwrap()
    }

    fn fibre(n: usize) -> LagrangianPatch {
        LagrangianPatch::new("f", ParamBox::cube(n, -1.0, 1.0).unwrap(), n, |u: &[f64]| {
            PhasePoint::new(vec![0.0; u.len()], u.to_vec()).unwrap()
        })
        .unwrap()
    }

    #[test]
    fn transverse_planes_meet_once_at_origin() {
        let s = DoublePointSearch {
            grid: 7,
            ..Default::default()
        };
        let pts = find_double_points(&section(3, 0.0), &fibre(3), &s).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].status, RefinementStatus::Refined);
        assert!(pts[0].point.to_flat().iter().all(|c| c.abs() < 1e-10));
    }

    #[test]
    fn parallel_sections_are_disjoint() {
        let s = DoublePointSearch {
            grid: 6,
            ..Default::default()
        };
        assert!(find_double_points(&section(2, 0.0), &section(2, 0.5), &s)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn symmetric_in_the_two_patches() {
        // two curves in T*R crossing at two points
        let a = LagrangianPatch::new("a", ParamBox::cube(1, -2.0, 2.0).unwrap(), 1, |u: &[f64]| {
            PhasePoint::new(vec![u[0]], vec![u[0] * u[0] - 1.0]).unwrap()
        })
        .unwrap();
        let b = LagrangianPatch::new("b", ParamBox::cube(1, -2.0, 2.0).unwrap(), 1, |u: &[f64]| {
            PhasePoint::new(vec![u[0]], vec![0.3 * u[0]]).unwrap()
        })
        .unwrap();
        let s = DoublePointSearch {
            grid: 50,
            ..Default::default()
        };
        let mut ab: Vec<f64> = find_double_points(&a, &b, &s).unwrap().iter().map(|p| p.point.x()[0]).collect();
        let mut ba: Vec<f64> = find_double_points(&b, &a, &s).unwrap().iter().map(|p| p.point.x()[0]).collect();
        ab.sort_by(f64::total_cmp);
        ba.sort_by(f64::total_cmp);
        assert_eq!(ab.len(), 2);
        assert_eq!(ba.len(), 2);
        let exact = [(0.3 - (0.09f64 + 4.0).sqrt()) / 2.0, (0.3 + (0.09f64 + 4.0).sqrt()) / 2.0];
        for i in 0..2 {
            assert!((ab[i] - exact[i]).abs() < 1e-9);
            assert!((ba[i] - exact[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn mismatched_ambient_dimension() {
        let s = DoublePointSearch::default();
        assert!(find_double_points(&section(2, 0.0), &section(3, 0.0), &s).is_err());
    }
}
