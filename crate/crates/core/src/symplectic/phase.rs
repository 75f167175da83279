use alloc::vec::Vec;

use crate::linalg::dist;
use crate::{Error, Result};

/// A point `(x, y)` of `T*R^N`: position `x` and momentum `y`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhasePoint {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl PhasePoint {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::InvalidParameter {
                name: "x",
                reason: "ambient dimension must be at least 1".into(),
            });
        }
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                got: y.len(),
            });
        }
        Ok(Self { x, y })
    }

    /// Splits a `2N` vector laid out as `(x_1..x_N, y_1..y_N)`.
    pub fn from_flat(v: &[f64]) -> Result<Self> {
        if v.len() % 2 != 0 {
            return Err(Error::DimensionMismatch {
                expected: v.len() + 1,
                got: v.len(),
            });
        }
        let n = v.len() / 2;
        Self::new(v[..n].to_vec(), v[n..].to_vec())
    }

    pub fn origin(dim: usize) -> Self {
        Self {
            x: alloc::vec![0.0; dim],
            y: alloc::vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut v = self.x.clone();
        v.extend_from_slice(&self.y);
        v
    }

    pub fn distance(&self, other: &PhasePoint) -> f64 {
        let dx = dist(&self.x, &other.x);
        let dy = dist(&self.y, &other.y);
        crate::linalg::math::hypot(dx, dy)
    }
}

/// The standard form `ω = Σ dx_i ∧ dy_i` on `T*R^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticForm {
    dim: usize,
}

impl SymplecticForm {
    pub fn new(dim: usize) -> Self {
        Self { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Tangent vectors use the `(x_1..x_N, y_1..y_N)` layout.
    pub fn eval(&self, u: &[f64], v: &[f64]) -> Result<f64> {
        let n = self.dim;
        for w in [u, v] {
            if w.len() != 2 * n {
                return Err(Error::DimensionMismatch {
                    expected: 2 * n,
                    got: w.len(),
                });
            }
        }
        Ok(omega_unchecked(n, u, v))
    }
}

#[inline]
pub(crate) fn omega_unchecked(n: usize, u: &[f64], v: &[f64]) -> f64 {
    (0..n).map(|i| u[i] * v[n + i] - u[n + i] * v[i]).sum()
}

pub fn omega_eval(form: &SymplecticForm, u: &[f64], v: &[f64]) -> Result<f64> {
    form.eval(u, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pairing_examples() {
        let w = SymplecticForm::new(2);
        assert_eq!(w.eval(&[1.0, 0.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0]).unwrap(), 1.0);
        assert_eq!(w.eval(&[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(w.eval(&[1.0, 2.0, 0.0, 0.0], &[0.0, 0.0, 3.0, 4.0]).unwrap(), 11.0);
        assert!(matches!(
            w.eval(&[1.0, 0.0], &[0.0, 1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn phase_point_requires_equal_lengths() {
        assert!(PhasePoint::new(alloc::vec![1.0], alloc::vec![1.0, 2.0]).is_err());
        assert!(PhasePoint::new(alloc::vec![], alloc::vec![]).is_err());
        let p = PhasePoint::from_flat(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(p.x(), &[1.0, 2.0]);
        assert_eq!(p.to_flat(), alloc::vec![1.0, 2.0, 3.0, 4.0]);
    }

    proptest! {
        #[test]
        fn antisymmetric(u in proptest::collection::vec(-10.0..10.0f64, 6),
                         v in proptest::collection::vec(-10.0..10.0f64, 6)) {
            let w = SymplecticForm::new(3);
            let a = w.eval(&u, &v).unwrap();
            let b = w.eval(&v, &u).unwrap();
            prop_assert!((a + b).abs() < 1e-12);
        }

        #[test]
        fn position_momentum_pairing(x in proptest::collection::vec(-10.0..10.0f64, 3),
                                     y in proptest::collection::vec(-10.0..10.0f64, 3)) {
            let w = SymplecticForm::new(3);
            let mut u = x.clone();
            u.extend([0.0; 3]);
            let mut v = alloc::vec![0.0; 3];
            v.extend(y.iter().copied());
            let dot: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
            prop_assert!((w.eval(&u, &v).unwrap() - dot).abs() < 1e-12);
        }
    }
}
