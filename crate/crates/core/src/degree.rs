//! Degree values in a lexicographically ordered lattice `Z^r` extended by a
//! bottom element, and weight systems assigning such values to variables.
//!
//! Every comparison that would involve a rational multiple of a degree is
//! cross-multiplied by the caller; no fractional degree is ever stored.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// An element of `Z^r` under lexicographic order, or the bottom element
/// (the degree of the zero polynomial).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DegreeValue {
    Bottom,
    Vec(Vec<i64>),
}

impl DegreeValue {
    pub fn zero(r: usize) -> Self {
        DegreeValue::Vec(vec![0; r])
    }

    pub fn from_slice(v: &[i64]) -> Self {
        DegreeValue::Vec(v.to_vec())
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, DegreeValue::Bottom)
    }

    /// Components, or `None` for bottom.
    pub fn vec(&self) -> Option<&[i64]> {
        match self {
            DegreeValue::Bottom => None,
            DegreeValue::Vec(v) => Some(v),
        }
    }

    /// Components of a value known to be finite.
    ///
    /// Panics on bottom; callers use it only after ruling bottom out.
    pub fn comps(&self) -> &[i64] {
        self.vec().expect("finite degree expected")
    }

    pub fn rank(&self) -> Option<usize> {
        self.vec().map(|v| v.len())
    }

    /// True iff strictly greater than the zero vector.
    pub fn is_positive(&self) -> bool {
        match self {
            DegreeValue::Bottom => false,
            DegreeValue::Vec(v) => v.iter().find(|c| **c != 0).is_some_and(|c| *c > 0),
        }
    }

    pub fn is_zero_vec(&self) -> bool {
        matches!(self, DegreeValue::Vec(v) if v.iter().all(|c| *c == 0))
    }

    /// Sum; bottom absorbs.
    pub fn add(&self, other: &DegreeValue) -> DegreeValue {
        match (self, other) {
            (DegreeValue::Vec(a), DegreeValue::Vec(b)) => {
                assert_eq!(a.len(), b.len(), "degree rank mismatch");
                DegreeValue::Vec(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            _ => DegreeValue::Bottom,
        }
    }

    /// Difference of finite values; bottom if either side is bottom.
    pub fn sub(&self, other: &DegreeValue) -> DegreeValue {
        match (self, other) {
            (DegreeValue::Vec(a), DegreeValue::Vec(b)) => {
                assert_eq!(a.len(), b.len(), "degree rank mismatch");
                DegreeValue::Vec(a.iter().zip(b).map(|(x, y)| x - y).collect())
            }
            _ => DegreeValue::Bottom,
        }
    }

    /// Integer multiple. A zero multiple of a finite value is the zero vector.
    pub fn scale(&self, k: i64) -> DegreeValue {
        match self {
            DegreeValue::Bottom => DegreeValue::Bottom,
            DegreeValue::Vec(v) => DegreeValue::Vec(v.iter().map(|c| c * k).collect()),
        }
    }

    /// `self / k` when every component is divisible by `k`.
    pub fn divide_exact(&self, k: i64) -> Option<DegreeValue> {
        assert!(k != 0);
        let v = self.vec()?;
        if v.iter().all(|c| c % k == 0) {
            Some(DegreeValue::Vec(v.iter().map(|c| c / k).collect()))
        } else {
            None
        }
    }

    /// The integer `m` with `self = m * base`, if one exists.
    pub fn multiple_of(&self, base: &DegreeValue) -> Option<i64> {
        let (v, b) = (self.vec()?, base.vec()?);
        let k = b.iter().position(|c| *c != 0)?;
        if v[k] % b[k] != 0 {
            return None;
        }
        let m = v[k] / b[k];
        if v.iter().zip(b).all(|(x, y)| *x == m * y) {
            Some(m)
        } else {
            None
        }
    }

    /// First coordinate in which `self` is nonzero.
    pub fn leading_index(&self) -> Option<usize> {
        self.vec()?.iter().position(|c| *c != 0)
    }

    pub fn max(a: &DegreeValue, b: &DegreeValue) -> DegreeValue {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn min(a: &DegreeValue, b: &DegreeValue) -> DegreeValue {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }
}

impl PartialOrd for DegreeValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DegreeValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (DegreeValue::Bottom, DegreeValue::Bottom) => Ordering::Equal,
            (DegreeValue::Bottom, _) => Ordering::Less,
            (_, DegreeValue::Bottom) => Ordering::Greater,
            (DegreeValue::Vec(a), DegreeValue::Vec(b)) => {
                assert_eq!(a.len(), b.len(), "degree rank mismatch");
                a.cmp(b)
            }
        }
    }
}

impl fmt::Display for DegreeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeValue::Bottom => write!(f, "-inf"),
            DegreeValue::Vec(v) if v.len() == 1 => write!(f, "{}", v[0]),
            DegreeValue::Vec(v) => {
                write!(f, "(")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl Serialize for DegreeValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            DegreeValue::Bottom => s.serialize_str("-inf"),
            DegreeValue::Vec(v) => v.serialize(s),
        }
    }
}

/// Assignment of a positive degree value to each of `n` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSystem {
    n: usize,
    r: usize,
    weights: Vec<DegreeValue>,
    total: DegreeValue,
    rank: usize,
}

impl WeightSystem {
    pub fn new(weights: Vec<Vec<i64>>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeight("no variables".into()));
        }
        let r = weights[0].len();
        if r == 0 {
            return Err(Error::InvalidWeight("rank zero".into()));
        }
        let mut ws = Vec::with_capacity(weights.len());
        for (i, w) in weights.into_iter().enumerate() {
            if w.len() != r {
                return Err(Error::InvalidWeight(format!("weight {} has length {}", i + 1, w.len())));
            }
            let d = DegreeValue::Vec(w);
            if !d.is_positive() {
                return Err(Error::InvalidWeight(format!("weight {} = {} is not positive", i + 1, d)));
            }
            ws.push(d);
        }
        let total = ws.iter().fold(DegreeValue::zero(r), |acc, w| acc.add(w));
        let rank = lattice_rank(ws.iter().map(|w| w.comps()));
        Ok(WeightSystem { n: ws.len(), r, weights: ws, total, rank })
    }

    /// `w = (1, ..., 1)` in `Z`: the total degree.
    pub fn total_degree(n: usize) -> Self {
        WeightSystem::new(vec![vec![1]; n]).expect("valid")
    }

    /// `w_i = e_i` in `Z^n` with lexicographic order.
    pub fn lex_unit(n: usize) -> Self {
        let ws = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        WeightSystem::new(ws).expect("valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn weight(&self, i: usize) -> &DegreeValue {
        &self.weights[i]
    }

    pub fn weights(&self) -> &[DegreeValue] {
        &self.weights
    }

    /// `|w|`, the sum of the weights.
    pub fn total(&self) -> &DegreeValue {
        &self.total
    }

    /// Rank of the lattice spanned by the weights.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// True for `w = (1, ..., 1)` in `Z`.
    pub fn is_total_degree(&self) -> bool {
        self.r == 1 && self.weights.iter().all(|w| w.comps() == [1])
    }

    /// Degree of the monomial with exponent vector `exps`.
    pub fn monomial_degree(&self, exps: &[u16]) -> DegreeValue {
        let mut acc = vec![0i64; self.r];
        for (e, w) in exps.iter().zip(&self.weights) {
            if *e != 0 {
                for (a, c) in acc.iter_mut().zip(w.comps()) {
                    *a += i64::from(*e) * c;
                }
            }
        }
        DegreeValue::Vec(acc)
    }

    /// Weight vectors as plain integer rows, for serialization.
    pub fn vectors(&self) -> Vec<Vec<i64>> {
        self.weights.iter().map(|w| w.comps().to_vec()).collect()
    }
}

/// Rank over `Q` of a family of integer vectors.
pub fn lattice_rank<'a>(rows: impl Iterator<Item = &'a [i64]>) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .map(|r| r.iter().map(|c| BigRational::from_integer((*c).into())).collect())
        .collect();
    if m.is_empty() {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for i in 0..m.len() {
            if i != rank && !m[i][col].is_zero() {
                let f = &m[i][col] / &pivot;
                for j in col..cols {
                    let t = &f * &m[rank][j];
                    m[i][j] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// True iff no nonzero integer pair `(m1, m2)` has `m1 d1 = m2 d2`.
pub fn z_independent(d1: &DegreeValue, d2: &DegreeValue) -> Result<bool> {
    let (a, b) = match (d1.vec(), d2.vec()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::BottomDegree),
    };
    if a.len() != b.len() {
        return Err(Error::RankMismatch);
    }
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            if i128::from(a[i]) * i128::from(b[j]) != i128::from(a[j]) * i128::from(b[i]) {
                return Ok(true);
            }
        }
    }
    // all 2x2 minors vanish; a single coordinate still separates a zero vector
    Ok(false)
}

/// Some `(p, q)` with `p d1 + q d2 = d`, preferring the smallest `p`.
///
/// Independent generators give at most one rational solution (Cramer's
/// rule on a nonvanishing minor); proportional generators reduce to a
/// one-dimensional problem bounded by positivity.
pub fn semigroup_member(d: &DegreeValue, d1: &DegreeValue, d2: &DegreeValue) -> Option<(u64, u64)> {
    let (v, a, b) = (d.vec()?, d1.vec()?, d2.vec()?);
    if v.len() != a.len() || a.len() != b.len() {
        return None;
    }
    let check = |p: i64, q: i64| v.iter().zip(a).zip(b).all(|((x, y), z)| *x == p * y + q * z);
    let r = v.len();
    for i in 0..r {
        for j in (i + 1)..r {
            let det = a[i] * b[j] - a[j] * b[i];
            if det != 0 {
                let pn = v[i] * b[j] - v[j] * b[i];
                let qn = a[i] * v[j] - a[j] * v[i];
                if pn % det != 0 || qn % det != 0 {
                    return None;
                }
                let (p, q) = (pn / det, qn / det);
                return (p >= 0 && q >= 0 && check(p, q)).then_some((p as u64, q as u64));
            }
        }
    }
    // proportional generators (or rank one); both are positive, hence so is
    // their first nonzero coordinate
    let k = a.iter().position(|c| *c != 0)?;
    if b[k] == 0 || v[k] < 0 {
        return None;
    }
    let mut p = 0;
    while p * a[k] <= v[k] {
        let rest = v[k] - p * a[k];
        if rest % b[k] == 0 {
            let q = rest / b[k];
            if check(p, q) {
                return Some((p as u64, q as u64));
            }
        }
        p += 1;
    }
    None
}

/// `d / 2` when every component is even.
pub fn half(d: &DegreeValue) -> Option<DegreeValue> {
    d.divide_exact(2)
}

/// The coprime pair `(m1, m2)` of positive integers with `m1 d1 = m2 d2`,
/// for positive proportional values.
pub fn proportionality(d1: &DegreeValue, d2: &DegreeValue) -> Option<(i64, i64)> {
    let (a, b) = (d1.vec()?, d2.vec()?);
    if !d1.is_positive() || !d2.is_positive() || z_independent(d1, d2).ok()? {
        return None;
    }
    let k = a.iter().position(|c| *c != 0)?;
    let g = num_integer::gcd(a[k], b[k]);
    let (m1, m2) = (b[k] / g, a[k] / g);
    let ok = a.iter().zip(b).all(|(x, y)| m1 * x == m2 * y);
    (ok && m1 > 0 && m2 > 0).then_some((m1, m2))
}

/// Rational as a plain string `a` or `a/b`.
pub fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else if q.is_negative() {
        format!("-{}/{}", q.numer().abs(), q.denom())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: &[i64]) -> DegreeValue {
        DegreeValue::from_slice(v)
    }

    #[test]
    fn order_and_bottom() {
        assert!(DegreeValue::Bottom < d(&[-5, 0]));
        assert!(d(&[0, 9]) < d(&[1, 0]));
        assert_eq!(DegreeValue::Bottom.add(&d(&[1])), DegreeValue::Bottom);
    }

    #[test]
    fn independence_examples() {
        assert!(z_independent(&d(&[2, 0, 3]), &d(&[1, 0, 2])).unwrap());
        assert!(!z_independent(&d(&[2, 4]), &d(&[1, 2])).unwrap());
        assert!(z_independent(&d(&[0, 0, 1]), &d(&[2, 0, 3])).unwrap());
        assert!(z_independent(&DegreeValue::Bottom, &d(&[1])).is_err());
    }

    #[test]
    fn semigroup_examples() {
        assert_eq!(semigroup_member(&d(&[2, 0, 3]), &d(&[1, 0, 2]), &d(&[0, 0, 1])), None);
        assert_eq!(semigroup_member(&d(&[1, 0, 2]), &d(&[1, 0, 2]), &d(&[0, 0, 1])), Some((1, 0)));
        assert_eq!(semigroup_member(&d(&[5, 0, 8]), &d(&[2, 0, 3]), &d(&[1, 0, 2])), Some((2, 1)));
        assert_eq!(semigroup_member(&d(&[7]), &d(&[2]), &d(&[3])), Some((2, 1)));
        assert_eq!(semigroup_member(&d(&[1]), &d(&[2]), &d(&[3])), None);
    }

    #[test]
    fn half_examples() {
        assert_eq!(half(&d(&[2, 0, 4])), Some(d(&[1, 0, 2])));
        assert_eq!(half(&d(&[1, 0, 2])), None);
        assert_eq!(half(&d(&[0, 0, 1])), None);
    }

    #[test]
    fn weight_systems() {
        let lex = WeightSystem::lex_unit(3);
        assert_eq!(lex.total(), &d(&[1, 1, 1]));
        assert_eq!(lex.rank(), 3);
        let tot = WeightSystem::total_degree(3);
        assert_eq!(tot.total(), &d(&[3]));
        assert_eq!(tot.rank(), 1);
        assert!(WeightSystem::new(vec![vec![0, 1], vec![-1, 5]]).is_err());
        assert!(WeightSystem::new(vec![vec![0, 1], vec![1, -5]]).is_ok());
    }

    #[test]
    fn proportional_pairs() {
        assert_eq!(proportionality(&d(&[4]), &d(&[6])), Some((3, 2)));
        assert_eq!(proportionality(&d(&[1, 0]), &d(&[0, 1])), None);
    }
}
