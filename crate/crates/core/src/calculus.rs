//! Symbolic bookkeeping for surgeries: connected sums of standard pieces,
//! Euler characteristics, orientability, first Betti numbers and handle
//! descriptions of traces.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::linalg::Mat;
use crate::{Error, Result};

/// A prime piece of a connected sum. `S^1 x S^{n-1}` is always written `P^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Atom {
    /// `S^a x S^b` with `2 <= a <= b`.
    SphereProduct { a: usize, b: usize },
    /// `S^a x D^b` with `a, b >= 1`.
    SphereDisk { a: usize, b: usize },
    /// `S^1 x S^{n-1}`.
    P,
    /// The nonorientable `S^{n-1}`-bundle over `S^1`, `D^1 x S^{n-1} / ~`.
    Q,
}

fn chi_sphere(a: usize) -> i64 {
    if a % 2 == 0 {
        2
    } else {
        0
    }
}

impl Atom {
    fn euler(self) -> i64 {
        match self {
            Atom::SphereProduct { a, b } => chi_sphere(a) * chi_sphere(b),
            Atom::SphereDisk { a, .. } => chi_sphere(a),
            Atom::P | Atom::Q => 0,
        }
    }

    fn b1(self, n: usize) -> usize {
        match self {
            Atom::SphereProduct { .. } => 0,
            Atom::SphereDisk { a, .. } => usize::from(a == 1),
            Atom::P => 1 + usize::from(n == 2),
            Atom::Q => 1,
        }
    }

    fn has_boundary(self) -> bool {
        matches!(self, Atom::SphereDisk { .. })
    }

    fn fmt_with(self, n: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::SphereProduct { a, b } => write!(f, "S^{a}xS^{b}"),
            Atom::SphereDisk { a, b } => write!(f, "S^{a}xD^{b}"),
            Atom::P => write!(f, "P^{n}"),
            Atom::Q => write!(f, "Q^{n}"),
        }
    }
}

/// A connected sum of atoms in normal form (sorted, with multiplicities).
/// The empty sum is the sphere `S^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ManifoldDescriptor {
    dim: usize,
    atoms: Vec<(Atom, usize)>,
}

impl ManifoldDescriptor {
    pub fn sphere(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter {
                name: "dim",
                reason: "descriptors need dimension >= 2".into(),
            });
        }
        Ok(Self {
            dim,
            atoms: Vec::new(),
        })
    }

    /// `S^a x S^b` with `a + b = dim`, normalized (`P` when a factor is a circle,
    /// `S^n` when a factor is a point).
    pub fn sphere_product(a: usize, b: usize) -> Result<Self> {
        Self::sphere(a + b)?.sum_atom(normalize_product(a, b)?, 1)
    }

    pub fn from_atoms(dim: usize, atoms: &[(Atom, usize)]) -> Result<Self> {
        let mut d = Self::sphere(dim)?;
        for &(atom, count) in atoms {
            d = d.with(atom, count)?;
        }
        Ok(d)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[(Atom, usize)] {
        &self.atoms
    }

    pub fn count(&self, atom: Atom) -> usize {
        self.atoms.iter().find(|(a, _)| *a == atom).map_or(0, |(_, c)| *c)
    }

    fn check_atom(&self, atom: Atom) -> Result<Atom> {
        let n = self.dim;
        let bad = |why: &str| Err(Error::NotRepresentable(alloc::format!("{why} in dimension {n}")));
        match atom {
            Atom::SphereProduct { a, b } => {
                if a + b != n {
                    return bad("factor dimensions do not add up");
                }
                match normalize_product(a, b)? {
                    Some(x) => Ok(x),
                    None => bad("a point factor gives a disconnected product"),
                }
            }
            Atom::SphereDisk { a, b } => {
                if a + b != n || a == 0 || b == 0 {
                    return bad("S^a x D^b needs a, b >= 1 with a + b = n");
                }
                Ok(atom)
            }
            _ => Ok(atom),
        }
    }

    fn sum_atom(mut self, atom: Option<Atom>, count: usize) -> Result<Self> {
        let Some(atom) = atom else { return Ok(self) };
        let atom = self.check_atom(atom)?;
        if count == 0 {
            return Ok(self);
        }
        match self.atoms.iter_mut().find(|(a, _)| *a == atom) {
            Some(e) => e.1 += count,
            None => {
                self.atoms.push((atom, count));
                self.atoms.sort();
            }
        }
        Ok(self)
    }

    /// Connected sum with `count` copies of `atom`.
    pub fn with(self, atom: Atom, count: usize) -> Result<Self> {
        self.sum_atom(Some(atom), count)
    }

    pub fn connected_sum(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut d = self.clone();
        for &(a, c) in &other.atoms {
            d = d.with(a, c)?;
        }
        Ok(d)
    }

    fn remove(mut self, atom: Atom) -> Option<Self> {
        let i = self.atoms.iter().position(|(a, _)| *a == atom)?;
        self.atoms[i].1 -= 1;
        if self.atoms[i].1 == 0 {
            self.atoms.remove(i);
        }
        Some(self)
    }

    /// `χ(M # N) = χ(M) + χ(N) - χ(S^n)`.
    pub fn euler(&self) -> i64 {
        let n = self.dim;
        let chi_s = chi_sphere(n);
        self.atoms
            .iter()
            .fold(chi_s, |acc, &(a, c)| acc + c as i64 * (a.euler() - chi_s))
    }

    pub fn orientable(&self) -> bool {
        self.count(Atom::Q) == 0
    }

    /// Rank of `H_1`.
    pub fn b1(&self) -> usize {
        self.atoms.iter().map(|&(a, c)| c * a.b1(self.dim)).sum()
    }

    pub fn has_boundary(&self) -> bool {
        self.atoms.iter().any(|(a, _)| a.has_boundary())
    }
}

fn normalize_product(a: usize, b: usize) -> Result<Option<Atom>> {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    Ok(match a {
        0 => None,
        1 => Some(Atom::P),
        _ => Some(Atom::SphereProduct { a, b }),
    })
}

impl fmt::Display for ManifoldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return write!(f, "S^{}", self.dim);
        }
        for (i, &(a, c)) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(" # ")?;
            }
            if c > 1 {
                write!(f, "{c}")?;
            }
            a.fmt_with(self.dim, f)?;
        }
        Ok(())
    }
}

impl FromStr for ManifoldDescriptor {
    type Err = Error;

    /// Parses e.g. `S^2xS^3 # 2P^5 # Q^5`, `S^1xD^3` or `S^4`.
    fn from_str(s: &str) -> Result<Self> {
        let err = |why: &str| Error::Parse(alloc::format!("{why}: `{s}`"));
        let mut dim: Option<usize> = None;
        let mut atoms: Vec<(Option<Atom>, usize)> = Vec::new();
        let mut set_dim = |d: usize| -> Result<()> {
            match dim {
                Some(x) if x != d => Err(err("summands of different dimensions")),
                _ => {
                    dim = Some(d);
                    Ok(())
                }
            }
        };
        for term in s.split('#') {
            let term: String = term.chars().filter(|c| !c.is_whitespace()).collect();
            if term.is_empty() {
                return Err(err("empty summand"));
            }
            let digits = term.chars().take_while(|c| c.is_ascii_digit()).count();
            let (count, body) = if digits > 0 && !term[digits..].starts_with('^') {
                (term[..digits].parse::<usize>().map_err(|_| err("bad multiplicity"))?, &term[digits..])
            } else {
                (1, &term[..])
            };
            let factors: Vec<&str> = body.split(['x', '×']).collect();
            let parse_factor = |t: &str| -> Result<(char, usize)> {
                let mut it = t.splitn(2, '^');
                let head = it.next().unwrap_or_default();
                let d = it
                    .next()
                    .and_then(|d| d.trim_matches(|c| c == '{' || c == '}').parse::<usize>().ok())
                    .ok_or_else(|| err("expected a dimension after ^"))?;
                let c = match head {
                    "S" => 'S',
                    "D" => 'D',
                    "P" => 'P',
                    "Q" => 'Q',
                    _ => return Err(err("unknown factor")),
                };
                Ok((c, d))
            };
            let atom = match factors.as_slice() {
                [one] => match parse_factor(one)? {
                    ('S', d) => {
                        set_dim(d)?;
                        None
                    }
                    ('P', d) => {
                        set_dim(d)?;
                        Some(Atom::P)
                    }
                    ('Q', d) => {
                        set_dim(d)?;
                        Some(Atom::Q)
                    }
                    _ => return Err(err("a disk is not closed under connected sum")),
                },
                [l, r] => match (parse_factor(l)?, parse_factor(r)?) {
                    (('S', a), ('S', b)) => {
                        set_dim(a + b)?;
                        normalize_product(a, b)?
                    }
                    (('S', a), ('D', b)) => {
                        set_dim(a + b)?;
                        Some(Atom::SphereDisk { a, b })
                    }
                    _ => return Err(err("unsupported product")),
                },
                _ => return Err(err("at most two factors per summand")),
            };
            atoms.push((atom, count));
        }
        let mut d = ManifoldDescriptor::sphere(dim.ok_or_else(|| err("no summands"))?)?;
        for (a, c) in atoms {
            d = d.sum_atom(a, c)?;
        }
        Ok(d)
    }
}

/// `χ(L') = χ(L) + (-1)^{k+1} + (-1)^{n-k-1}` for a `k`-surgery on an `n`-manifold.
pub fn euler_after_surgery(chi: i64, n: usize, k: usize) -> Result<i64> {
    if k >= n {
        return Err(Error::OutOfRange(alloc::format!("surgery index k = {k} needs k <= n - 1 = {}", n as i64 - 1)));
    }
    let sign = |e: usize| if e % 2 == 0 { 1 } else { -1 };
    Ok(chi + sign(k + 1) + sign(n - k - 1))
}

/// How the 0-surgery at the double point is resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SumFactor {
    P,
    Q,
}

impl SumFactor {
    fn atom(self) -> Atom {
        match self {
            SumFactor::P => Atom::P,
            SumFactor::Q => Atom::Q,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum OrientabilityVerdict {
    Orientable,
    NonOrientable,
    /// Either outcome, depending on which sheet is sent to `R^n`.
    Choice,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrientationReport {
    /// `Λ'- · Λ'+`.
    pub intersection_index: i64,
    /// Determinant of the basis `o+ ⊕ o-` against the symplectic basis.
    pub determinant: f64,
    /// `(-1)^{n(n-1)/2 + k + 1} 2^n`.
    pub expected_determinant: f64,
    pub verdict: OrientabilityVerdict,
}

fn parity(e: usize) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Computes the orientation of `o+ ⊕ o-` at the double point numerically
/// and derives the intersection index and the orientability verdict.
pub fn orientation_sign(n: usize, k: usize) -> Result<OrientationReport> {
    if n == 0 || k >= n {
        return Err(Error::OutOfRange(alloc::format!("need 0 <= k <= n - 1, got n = {n}, k = {k}")));
    }
    // columns: o+ then o-, in coordinates (x1, y1, ..., xn, yn)
    let mut m = Mat::zeros(2 * n, 2 * n);
    for (block, sheet) in [(0, 1.0), (1, -1.0)] {
        for i in 0..n {
            let s = if i <= k { sheet } else { -sheet };
            let col = block * n + i;
            m[(2 * i, col)] = 1.0;
            m[(2 * i + 1, col)] = s;
        }
    }
    let determinant = m.det();
    let expected = (parity(n * (n - 1) / 2 + k + 1) << n) as f64;
    if (determinant - expected).abs() > 1e-9 * expected.abs() {
        return Err(Error::ModelViolation(alloc::format!(
            "orientation determinant {determinant} differs from {expected}"
        )));
    }
    // reversing the orientation of one sheet flips the sign once
    let index = -(determinant.signum() as i64);
    let verdict = if n % 2 == 1 {
        OrientabilityVerdict::Choice
    } else if parity(n * (n - 1) / 2 + 1) * index == 1 {
        OrientabilityVerdict::Orientable
    } else {
        OrientabilityVerdict::NonOrientable
    };
    Ok(OrientationReport {
        intersection_index: index,
        determinant,
        expected_determinant: expected,
        verdict,
    })
}

/// Where a `k`-surgery is performed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SurgerySite {
    /// A sphere bounding a disk: adds a summand `S^{k+1} x S^{n-k-1}`.
    Trivial,
    /// The sphere factor `S^k x {pt}` of a summand `S^k x S^{n-k}`, which is removed.
    Factor,
}

/// A `k`-surgery on a descriptor. `k = 0` joins two points and needs the
/// resolution; for `k >= 1` it must be `None`.
pub fn apply_surgery(
    desc: &ManifoldDescriptor,
    k: usize,
    site: SurgerySite,
    resolution: Option<SumFactor>,
) -> Result<ManifoldDescriptor> {
    let n = desc.dim();
    if k >= n {
        return Err(Error::OutOfRange(alloc::format!("surgery index k = {k} needs k <= n - 1")));
    }
    if desc.has_boundary() {
        return Err(Error::NotRepresentable("surgery on a manifold with boundary".into()));
    }
    if k == 0 {
        let Some(r) = resolution else {
            return Err(Error::InvalidParameter {
                name: "resolution",
                reason: "a 0-surgery needs the choice P or Q".into(),
            });
        };
        return desc.clone().with(r.atom(), 1);
    }
    if resolution.is_some() {
        return Err(Error::InvalidParameter {
            name: "resolution",
            reason: "only 0-surgeries take a resolution".into(),
        });
    }
    match site {
        SurgerySite::Trivial => match normalize_product(k + 1, n - k - 1)? {
            Some(atom) => desc.clone().with(atom, 1),
            None => Err(Error::NotRepresentable(
                "surgery on a trivial (n-1)-sphere splits off a sphere".into(),
            )),
        },
        SurgerySite::Factor => {
            let atom = normalize_product(k, n - k)?.ok_or_else(|| Error::NotRepresentable("point factor".into()))?;
            desc.clone().remove(atom).ok_or_else(|| {
                Error::NotRepresentable(alloc::format!("no summand S^{k}xS^{} to operate on in {desc}", n - k))
            })
        }
    }
}

/// The resolution forced by the orientation computation, if any.
pub fn forced_resolution(n: usize, k: usize) -> Result<Option<SumFactor>> {
    Ok(match orientation_sign(n, k)?.verdict {
        OrientabilityVerdict::Orientable => Some(SumFactor::P),
        OrientabilityVerdict::NonOrientable => Some(SumFactor::Q),
        OrientabilityVerdict::Choice => None,
    })
}

fn checked_resolution(n: usize, k: usize, resolution: Option<SumFactor>) -> Result<SumFactor> {
    match (forced_resolution(n, k)?, resolution) {
        (Some(f), None) => Ok(f),
        (Some(f), Some(r)) if f == r => Ok(r),
        (Some(f), Some(r)) => Err(Error::InvalidParameter {
            name: "resolution",
            reason: alloc::format!("n = {n} even and k = {k} force {f:?}, not {r:?}"),
        }),
        (None, Some(r)) => Ok(r),
        (None, None) => Err(Error::InvalidParameter {
            name: "resolution",
            reason: alloc::format!("n = {n} is odd: choose P or Q explicitly"),
        }),
    }
}

/// A `k`-antisurgery: surgery on an isotropic sphere bounding a disk,
/// followed by the 0-surgery removing the double point. For `n` even the
/// resolution is forced and may be omitted.
pub fn antisurgery(desc: &ManifoldDescriptor, k: usize, resolution: Option<SumFactor>) -> Result<ManifoldDescriptor> {
    let n = desc.dim();
    if k + 1 >= n {
        if k + 1 == n {
            // the split-off sphere is joined back by the 0-surgery
            return Ok(desc.clone());
        }
        return Err(Error::OutOfRange(alloc::format!("surgery index k = {k} needs k <= n - 1")));
    }
    let r = checked_resolution(n, k, resolution)?;
    // a trivially framed 0-sphere bounding an arc gives the orientable summand
    let standard = if k == 0 { Some(SumFactor::P) } else { None };
    let once = apply_surgery(desc, k, SurgerySite::Trivial, standard)?;
    apply_surgery(&once, 0, SurgerySite::Trivial, Some(r))
}

/// `(rank H_1, rank H_2(M, L))` after the antisurgery.
pub fn homology_transition(n: usize, k: usize, h1: usize, h2_rel: usize) -> Result<(usize, usize)> {
    if k < 2 || k + 3 > n {
        return Err(Error::OutOfRange(alloc::format!(
            "homology transition holds for 2 <= k <= n - 3, got n = {n}, k = {k}"
        )));
    }
    Ok((h1 + 1, h2_rel + 1))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CobordismDescriptor {
    pub from_end: ManifoldDescriptor,
    pub to_end: ManifoldDescriptor,
    /// `(index, count)` in attaching order.
    pub handles: Vec<(usize, usize)>,
}

impl CobordismDescriptor {
    /// `χ(to) - χ(from)` as predicted by the handles.
    pub fn predicted_euler_change(&self) -> i64 {
        let n = self.from_end.dim();
        self.handles
            .iter()
            .map(|&(j, c)| c as i64 * (parity(j) + parity(n + 2 - j)))
            .sum()
    }

    pub fn is_consistent(&self) -> bool {
        self.handles.iter().all(|&(j, _)| j <= self.from_end.dim() + 1)
            && self.to_end.euler() - self.from_end.euler() == self.predicted_euler_change()
    }
}

/// The cobordism from `L` to its antisurgery: a `(k+1)`-handle, then a 1-handle.
pub fn trace_descriptor(
    l: &ManifoldDescriptor,
    k: usize,
    resolution: Option<SumFactor>,
) -> Result<CobordismDescriptor> {
    let to_end = antisurgery(l, k, resolution)?;
    Ok(CobordismDescriptor {
        from_end: l.clone(),
        to_end,
        handles: alloc::vec![(k + 1, 1), (1, 1)],
    })
}

impl fmt::Display for CobordismDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hs: Vec<String> = self.handles.iter().map(|(j, c)| alloc::format!("{c}x{j}-handle")).collect();
        write!(f, "{} -> {} via {}", self.from_end, self.to_end, hs.join(", "))
    }
}

impl fmt::Display for SumFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SumFactor::P => "P",
            SumFactor::Q => "Q",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn d(s: &str) -> ManifoldDescriptor {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["S^4", "P^3", "S^2xS^3 # 2P^5 # Q^5", "S^1xD^3"] {
            assert_eq!(d(s).to_string(), s);
        }
        assert_eq!(d("S^3xS^2 # P^5"), d("P^5 # S^2xS^3"));
        assert_eq!(d("S^1xS^3"), d("P^4"));
        assert_eq!(d("S^0xS^4"), d("S^4"));
        assert!("S^2xS^3 # P^4".parse::<ManifoldDescriptor>().is_err());
        assert!("T^2".parse::<ManifoldDescriptor>().is_err());
    }

    #[test]
    fn euler_values() {
        assert_eq!(euler_after_surgery(0, 4, 1).unwrap(), 2);
        assert_eq!(euler_after_surgery(0, 3, 1).unwrap(), 0);
        assert_eq!(euler_after_surgery(2, 2, 0).unwrap(), 0);
        assert_eq!(d("S^2xS^2").euler(), 4);
        assert_eq!(d("P^2").euler(), 0);
        assert_eq!(d("Q^2 # Q^2").euler(), -2);
        assert_eq!(d("S^1xD^2").euler(), 0);
    }

    #[test]
    fn b1_values() {
        assert_eq!(d("P^2").b1(), 2);
        assert_eq!(d("P^5 # Q^5").b1(), 2);
        assert_eq!(d("S^2xS^3").b1(), 0);
    }

    #[test]
    fn orientation_examples() {
        let r = orientation_sign(2, 0).unwrap();
        assert_eq!((r.determinant, r.intersection_index, r.verdict), (4.0, -1, OrientabilityVerdict::NonOrientable));
        let r = orientation_sign(2, 1).unwrap();
        assert_eq!((r.determinant, r.verdict), (-4.0, OrientabilityVerdict::Orientable));
        for k in 0..3 {
            assert_eq!(orientation_sign(3, k).unwrap().verdict, OrientabilityVerdict::Choice);
        }
    }

    #[test]
    fn composite_on_p() {
        let p = ManifoldDescriptor::sphere_product(1, 4).unwrap();
        let r = antisurgery(&p, 2, Some(SumFactor::P)).unwrap();
        assert_eq!(r, d("S^3xS^2 # 2P^5"));
        let r = antisurgery(&p, 2, Some(SumFactor::Q)).unwrap();
        assert_eq!(r.to_string(), "S^2xS^3 # P^5 # Q^5");
        assert!(!r.orientable());
        assert!(antisurgery(&p, 2, None).is_err());
    }

    #[test]
    fn forced_resolution_for_even_n() {
        let p = d("P^4");
        assert_eq!(antisurgery(&p, 1, None).unwrap(), d("S^2xS^2 # 2P^4"));
        assert_eq!(antisurgery(&p, 0, None).unwrap(), d("P^4 # P^4 # Q^4"));
        assert!(antisurgery(&p, 1, Some(SumFactor::Q)).is_err());
    }

    #[test]
    fn factor_surgery() {
        assert_eq!(apply_surgery(&d("P^3"), 1, SurgerySite::Factor, None).unwrap(), d("S^3"));
        assert!(matches!(
            apply_surgery(&d("S^3"), 1, SurgerySite::Factor, None),
            Err(Error::NotRepresentable(_))
        ));
        assert!(!apply_surgery(&d("S^4"), 0, SurgerySite::Trivial, Some(SumFactor::Q)).unwrap().orientable());
    }

    #[test]
    fn homology() {
        assert_eq!(homology_transition(6, 2, 1, 1).unwrap(), (2, 2));
        assert_eq!(homology_transition(5, 2, 1, 1).unwrap(), (2, 2));
        assert!(homology_transition(4, 1, 1, 1).is_err());
    }

    #[test]
    fn traces() {
        let t = trace_descriptor(&d("P^2"), 1, None).unwrap();
        assert_eq!(t.handles, alloc::vec![(2, 1), (1, 1)]);
        assert!(t.is_consistent());
        let t = trace_descriptor(&d("P^3"), 2, Some(SumFactor::P)).unwrap();
        assert_eq!(t.handles, alloc::vec![(3, 1), (1, 1)]);
        assert_eq!(t.to_end, d("P^3"));
        assert!(t.is_consistent());
    }
}
