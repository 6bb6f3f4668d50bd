//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A polynomial is a map from monomials to nonzero coefficients; the zero
//! polynomial is the empty map. Monomials are ordered graded-lexicographically
//! (total degree first, then exponents with `x1` most significant), which fixes
//! iteration and printing order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::degree::{DegreeValue, WeightSystem};
use crate::error::{Error, Result};

/// Largest supported number of variables.
pub const MAX_VARS: usize = 8;

/// Exponent vector `x1^a1 ... xn^an`.
///
/// Equality, hashing and order ignore the declared arity, so the same
/// exponent vector compares equal across ambient rings.
#[derive(Clone, Copy)]
pub struct Monomial {
    n: u8,
    e: [u16; MAX_VARS],
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        assert!(n <= MAX_VARS, "at most {MAX_VARS} variables");
        Monomial { n: n as u8, e: [0; MAX_VARS] }
    }

    pub fn new(exps: &[u16]) -> Self {
        let mut m = Monomial::one(exps.len());
        m.e[..exps.len()].copy_from_slice(exps);
        m
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut m = Monomial::one(n);
        m.e[i] = 1;
        m
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn exps(&self) -> &[u16] {
        &self.e[..self.n as usize]
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.e[i]
    }

    pub fn total_degree(&self) -> u32 {
        self.e.iter().map(|x| u32::from(*x)).sum()
    }

    pub fn is_one(&self) -> bool {
        self.e.iter().all(|x| *x == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = Monomial { n: self.n.max(other.n), e: self.e };
        for (a, b) in m.e.iter_mut().zip(other.e.iter()) {
            *a = a.checked_add(*b).expect("exponent overflow");
        }
        m
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut m = Monomial { n: self.n.max(other.n), e: self.e };
        for (a, b) in m.e.iter_mut().zip(other.e.iter()) {
            *a = a.checked_sub(*b)?;
        }
        Some(m)
    }

    fn with_arity(mut self, n: usize) -> Monomial {
        self.n = self.n.max(n as u8);
        self
    }
}

impl PartialEq for Monomial {
    fn eq(&self, other: &Self) -> bool {
        self.e == other.e
    }
}

impl Eq for Monomial {}

impl std::hash::Hash for Monomial {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.e.hash(h)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree().cmp(&other.total_degree()).then_with(|| self.e.cmp(&other.e))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps())
    }
}

pub type Coeff = BigRational;

pub fn q(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Coeff {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact rational polynomial in `n` variables.
///
/// Equality compares terms only, so a polynomial equals its embedding in a
/// ring with more variables.
#[derive(Clone)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Monomial, Coeff>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.terms.hash(h)
    }
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_VARS, "at most {MAX_VARS} variables");
        Polynomial { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Polynomial::constant(n, Coeff::one())
    }

    pub fn constant(n: usize, c: Coeff) -> Self {
        let mut p = Polynomial::zero(n);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(n), c);
        }
        p
    }

    /// The variable `x_{i+1}` (zero-based index `i`).
    pub fn var(n: usize, i: usize) -> Self {
        assert!(i < n);
        Polynomial::term(Monomial::var(n, i), Coeff::one())
    }

    pub fn term(m: Monomial, c: Coeff) -> Self {
        let mut p = Polynomial::zero(m.n());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, Coeff)>) -> Self {
        let mut acc: HashMap<Monomial, Coeff> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m.with_arity(n)).or_insert_with(Coeff::zero) += c;
        }
        Polynomial::from_map(n, acc)
    }

    fn from_map(n: usize, acc: HashMap<Monomial, Coeff>) -> Self {
        Polynomial { n, terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Same polynomial viewed in `n >= self.n()` variables.
    pub fn with_arity(&self, n: usize) -> Polynomial {
        assert!(n >= self.n);
        Polynomial { n, terms: self.terms.iter().map(|(m, c)| (m.with_arity(n), c.clone())).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn constant_term(&self) -> Coeff {
        self.coeff(&Monomial::one(self.n))
    }

    /// Coefficient of the largest monomial in canonical order.
    pub fn leading_coeff(&self) -> Option<&Coeff> {
        self.terms.iter().next_back().map(|(_, c)| c)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// True iff some term has a positive exponent of `x_{i+1}`.
    pub fn depends_on(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.exp(i) > 0)
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.n);
        }
        Polynomial { n: self.n, terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect() }
    }

    pub fn add_scaled(&mut self, other: &Polynomial, c: &Coeff) {
        if c.is_zero() {
            return;
        }
        if other.n > self.n {
            *self = self.with_arity(other.n);
        }
        let n = self.n;
        for (m, a) in &other.terms {
            let m = m.with_arity(n);
            let v = a * c;
            match self.terms.get_mut(&m) {
                Some(x) => {
                    *x += v;
                    if x.is_zero() {
                        self.terms.remove(&m);
                    }
                }
                None => {
                    self.terms.insert(m, v);
                }
            }
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        self.add_scaled(&Polynomial::term(m, c), &Coeff::one());
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.n.max(m.n()));
        }
        let n = self.n.max(m.n());
        Polynomial { n, terms: self.terms.iter().map(|(a, x)| (a.mul(m).with_arity(n), x * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut result = Polynomial::one(self.n);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `∂/∂x_{i+1}`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e > 0 {
                let mut d = *m;
                d.e[i] -= 1;
                out.terms.insert(d, c * q(i64::from(e)));
            }
        }
        out
    }

    /// Substitute `subs[i]` for `x_{i+1}` and expand.
    pub fn compose(&self, subs: &[Polynomial]) -> Result<Polynomial> {
        if subs.len() != self.n {
            return Err(Error::Arity { expected: self.n, found: subs.len() });
        }
        let out_n = subs.iter().map(|s| s.n).max().unwrap_or(0);
        let mut cache: Vec<Vec<Polynomial>> = subs.iter().map(|s| vec![Polynomial::one(out_n), s.with_arity(out_n)]).collect();
        let mut acc: HashMap<Monomial, Coeff> = HashMap::new();
        for (m, c) in &self.terms {
            let mut prod = Polynomial::constant(out_n, c.clone());
            for i in 0..self.n {
                let e = m.exp(i) as usize;
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e {
                    let next = &cache[i][cache[i].len() - 1] * &cache[i][1];
                    cache[i].push(next);
                }
                prod = &prod * &cache[i][e];
            }
            for (pm, pc) in prod.terms {
                *acc.entry(pm).or_insert_with(Coeff::zero) += pc;
            }
        }
        Ok(Polynomial::from_map(out_n, acc))
    }

    /// `deg_w`: bottom for zero, else the largest weighted degree of a term.
    pub fn deg(&self, ws: &WeightSystem) -> Result<DegreeValue> {
        self.check_arity(ws)?;
        Ok(self.terms.keys().map(|m| ws.monomial_degree(m.exps())).max().unwrap_or(DegreeValue::Bottom))
    }

    /// Degree, assuming the arity was validated elsewhere.
    pub fn degw(&self, ws: &WeightSystem) -> DegreeValue {
        self.deg(ws).expect("arity checked by caller")
    }

    fn check_arity(&self, ws: &WeightSystem) -> Result<()> {
        if self.n > ws.n() {
            return Err(Error::Arity { expected: ws.n(), found: self.n });
        }
        Ok(())
    }

    /// The w-homogeneous part of top degree.
    pub fn leading_form(&self, ws: &WeightSystem) -> Result<Polynomial> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let d = self.deg(ws)?;
        Ok(self.homogeneous_part(ws, &d))
    }

    /// Leading form of a polynomial known to be nonzero and of valid arity.
    pub fn lf(&self, ws: &WeightSystem) -> Polynomial {
        self.leading_form(ws).expect("nonzero polynomial")
    }

    pub fn homogeneous_part(&self, ws: &WeightSystem, d: &DegreeValue) -> Polynomial {
        Polynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| &ws.monomial_degree(m.exps()) == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Terms of degree at least `floor`.
    pub fn truncate_ge(&self, ws: &WeightSystem, floor: &DegreeValue) -> Polynomial {
        Polynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| &ws.monomial_degree(m.exps()) >= floor)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn is_homogeneous(&self, ws: &WeightSystem) -> bool {
        let mut it = self.terms.keys().map(|m| ws.monomial_degree(m.exps()));
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Product restricted to terms of degree at least `floor`.
    pub fn mul_ge(&self, other: &Polynomial, ws: &WeightSystem, floor: &DegreeValue) -> Polynomial {
        let mut b: Vec<(DegreeValue, &Monomial, &Coeff)> =
            other.terms.iter().map(|(m, c)| (ws.monomial_degree(m.exps()), m, c)).collect();
        b.sort_by(|x, y| y.0.cmp(&x.0));
        let n = self.n.max(other.n);
        let mut acc: HashMap<Monomial, Coeff> = HashMap::new();
        for (ma, ca) in &self.terms {
            let da = ws.monomial_degree(ma.exps());
            for (db, mb, cb) in &b {
                if da.add(db) < *floor {
                    break;
                }
                *acc.entry(ma.mul(mb).with_arity(n)).or_insert_with(Coeff::zero) += ca * *cb;
            }
        }
        Polynomial::from_map(n, acc)
    }

    /// Exact ratio `c` with `self = c * other`, if one exists.
    pub fn proportional_to(&self, other: &Polynomial) -> Option<Coeff> {
        if self.is_zero() || other.is_zero() || self.terms.len() != other.terms.len() {
            return None;
        }
        let mut ratio: Option<Coeff> = None;
        for ((ma, ca), (mb, cb)) in self.terms.iter().zip(other.terms.iter()) {
            if ma != mb {
                return None;
            }
            let r = ca / cb;
            match &ratio {
                None => ratio = Some(r),
                Some(x) if *x == r => {}
                Some(_) => return None,
            }
        }
        ratio
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coeff() {
            None => self.clone(),
            Some(c) => self.scale(&(Coeff::one() / c)),
        }
    }

    /// Multivariate exact division by a nonzero polynomial, if it divides.
    pub fn exact_div(&self, divisor: &Polynomial) -> Option<Polynomial> {
        if divisor.is_zero() {
            return None;
        }
        let n = self.n.max(divisor.n);
        let (lm, lc) = divisor.terms.iter().next_back().map(|(m, c)| (*m, c.clone()))?;
        let mut rem = self.with_arity(n);
        let mut quot = Polynomial::zero(n);
        while let Some((m, c)) = rem.terms.iter().next_back().map(|(m, c)| (*m, c.clone())) {
            let qm = m.div(&lm)?;
            let qc = c / &lc;
            rem.add_scaled(&divisor.mul_monomial(&qm, &qc), &-Coeff::one());
            quot.add_term(qm, qc);
        }
        Some(quot)
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, &Coeff::one());
        out
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Coeff::one());
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Coeff::one())
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let n = self.n.max(rhs.n);
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(n);
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().expect("one term");
            return rhs.mul_monomial(m, c).with_arity(n);
        }
        if rhs.terms.len() == 1 {
            let (m, c) = rhs.terms.iter().next().expect("one term");
            return self.mul_monomial(m, c).with_arity(n);
        }
        let mut acc: HashMap<Monomial, Coeff> = HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb).with_arity(n);
                let v = ca * cb;
                match acc.get_mut(&m) {
                    Some(x) => *x += v,
                    None => {
                        acc.insert(m, v);
                    }
                }
            }
        }
        Polynomial::from_map(n, acc)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Polynomial {
        Polynomial::var(3, i)
    }

    #[test]
    fn ring_basics() {
        let p = &x(0) * &x(1);
        assert_eq!(p.num_terms(), 1);
        let f = &(&x(0) + &x(1)) * &x(2);
        assert!((&f + &(-&f)).is_zero());
        assert_eq!((&x(0) + &x(1)).pow(2).num_terms(), 3);
    }

    #[test]
    fn compose_binomial() {
        let f = x(0).pow(2);
        let g = f.compose(&[&x(0) + &x(1), x(1), x(2)]).unwrap();
        assert_eq!(g, &(&x(0).pow(2) + &(&x(0) * &x(1)).scale(&q(2))) + &x(1).pow(2));
        assert_eq!(f.compose(&[x(0), x(1), x(2)]).unwrap(), f);
        assert!(f.compose(&[x(0)]).is_err());
    }

    #[test]
    fn leading_forms() {
        let lex = WeightSystem::lex_unit(3);
        let f = &x(0) + &x(1).pow(2);
        assert_eq!(f.leading_form(&lex).unwrap(), x(0));
        assert!(Polynomial::zero(3).leading_form(&lex).is_err());
        assert_eq!(Polynomial::zero(3).deg(&lex).unwrap(), DegreeValue::Bottom);
    }

    #[test]
    fn division_and_proportion() {
        let a = &x(0) + &x(1);
        let b = &a * &(&x(2) - &x(0));
        assert_eq!(b.exact_div(&a).unwrap(), &x(2) - &x(0));
        assert!(x(0).exact_div(&x(1)).is_none());
        assert_eq!(a.scale(&qr(3, 2)).proportional_to(&a), Some(qr(3, 2)));
        assert_eq!(x(0).proportional_to(&x(1)), None);
    }

    #[test]
    fn derivative_rules() {
        let t = &(&x(0) * &x(2)) + &x(1).pow(2);
        assert_eq!(t.derivative(1), x(1).scale(&q(2)));
        assert_eq!(t.derivative(0), x(2));
    }
}
