//! Exterior differential forms over `Q[x1..xn]`.
//!
//! A grade-`l` form is stored as a map from strictly increasing index tuples
//! to nonzero polynomial coefficients. Indices are 0-based internally and
//! printed 1-based.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::degree::{DegreeValue, WeightSystem};
use crate::poly::{Coeff, Polynomial};

#[derive(Clone, PartialEq, Eq)]
pub struct DiffForm {
    n: usize,
    grade: usize,
    coeffs: BTreeMap<Vec<u8>, Polynomial>,
}

impl DiffForm {
    pub fn zero(n: usize, grade: usize) -> Self {
        DiffForm { n, grade, coeffs: BTreeMap::new() }
    }

    /// The grade-0 form `f`.
    pub fn function(f: &Polynomial) -> Self {
        let mut out = DiffForm::zero(f.n(), 0);
        if !f.is_zero() {
            out.coeffs.insert(Vec::new(), f.clone());
        }
        out
    }

    /// `dx_i` (0-based `i`).
    pub fn dx(n: usize, i: usize) -> Self {
        assert!(i < n);
        let mut out = DiffForm::zero(n, 1);
        out.coeffs.insert(vec![i as u8], Polynomial::one(n));
        out
    }

    /// Build from `(indices, coefficient)` pairs; indices need not be sorted.
    /// Repeated indices give zero, and sorting applies the permutation sign.
    pub fn from_terms(n: usize, grade: usize, terms: impl IntoIterator<Item = (Vec<usize>, Polynomial)>) -> Self {
        let mut out = DiffForm::zero(n, grade);
        for (idx, p) in terms {
            assert_eq!(idx.len(), grade);
            assert!(idx.iter().all(|&i| i < n));
            if let Some((sorted, sign)) = sort_with_sign(idx.iter().map(|&i| i as u8).collect()) {
                let p = if sign { -&p } else { p };
                out.add_coeff(sorted, &p);
            }
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient at a strictly increasing 0-based index tuple.
    pub fn coeff(&self, idx: &[usize]) -> Polynomial {
        let key: Vec<u8> = idx.iter().map(|&i| i as u8).collect();
        self.coeffs.get(&key).cloned().unwrap_or_else(|| Polynomial::zero(self.n))
    }

    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, &Polynomial)> {
        self.coeffs.iter().map(|(k, p)| (k.iter().map(|&i| i as usize).collect(), p))
    }

    fn add_coeff(&mut self, key: Vec<u8>, p: &Polynomial) {
        let slot = self.coeffs.entry(key.clone()).or_insert_with(|| Polynomial::zero(self.n));
        *slot = &*slot + p;
        if slot.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    pub fn add(&self, other: &DiffForm) -> DiffForm {
        assert_eq!(self.grade, other.grade);
        let mut out = self.clone();
        out.n = self.n.max(other.n);
        for (k, p) in &other.coeffs {
            out.add_coeff(k.clone(), p);
        }
        out
    }

    pub fn scale(&self, c: &Coeff) -> DiffForm {
        if c.is_zero() {
            return DiffForm::zero(self.n, self.grade);
        }
        DiffForm { n: self.n, grade: self.grade, coeffs: self.coeffs.iter().map(|(k, p)| (k.clone(), p.scale(c))).collect() }
    }

    /// Multiply every coefficient by the function `f`.
    pub fn mul_function(&self, f: &Polynomial) -> DiffForm {
        let mut out = DiffForm::zero(self.n.max(f.n()), self.grade);
        for (k, p) in &self.coeffs {
            out.add_coeff(k.clone(), &(p * f));
        }
        out
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &Polynomial> {
        self.coeffs.values()
    }
}

/// Sort an index tuple, returning `None` on a repeated index and otherwise
/// whether the sorting permutation is odd.
fn sort_with_sign(mut v: Vec<u8>) -> Option<(Vec<u8>, bool)> {
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, odd))
}

/// `df = Σ ∂f/∂x_i dx_i`.
pub fn differential(f: &Polynomial) -> DiffForm {
    let n = f.n();
    let mut out = DiffForm::zero(n, 1);
    for i in 0..n {
        let d = f.derivative(i);
        if !d.is_zero() {
            out.coeffs.insert(vec![i as u8], d);
        }
    }
    out
}

/// Exterior product. Grades beyond `n` give the zero form of that grade.
pub fn wedge(a: &DiffForm, b: &DiffForm) -> DiffForm {
    let n = a.n.max(b.n);
    let mut out = DiffForm::zero(n, a.grade + b.grade);
    if a.grade + b.grade > n {
        return out;
    }
    for (ka, pa) in &a.coeffs {
        for (kb, pb) in &b.coeffs {
            let joined: Vec<u8> = ka.iter().chain(kb).copied().collect();
            if let Some((sorted, odd)) = sort_with_sign(joined) {
                let prod = pa * pb;
                let prod = if odd { -&prod } else { prod };
                out.add_coeff(sorted, &prod);
            }
        }
    }
    out
}

/// `df_1 ∧ … ∧ df_l`; the empty wedge is the constant form 1.
pub fn wedge_differentials(fs: &[Polynomial]) -> DiffForm {
    let n = fs.iter().map(Polynomial::n).max().unwrap_or(0);
    let mut acc = DiffForm::function(&Polynomial::one(n));
    for f in fs {
        acc = wedge(&acc, &differential(f));
    }
    acc
}

/// `max deg_w(f_I · x_{i1}⋯x_{il})` over the stored tuples; Bottom for zero.
pub fn deg_w_form(ws: &WeightSystem, omega: &DiffForm) -> DegreeValue {
    let mut best = DegreeValue::Bottom;
    for (k, p) in &omega.coeffs {
        let mut d = p.degw(ws);
        for &i in k {
            d = d.add(ws.weight(i as usize));
        }
        if d > best {
            best = d;
        }
    }
    best
}

/// True iff `df_1 ∧ … ∧ df_l ≠ 0`.
pub fn algebraically_independent(fs: &[Polynomial]) -> bool {
    assert!(!fs.is_empty() && fs.len() <= 3, "between one and three polynomials");
    !wedge_differentials(fs).is_zero()
}

/// For 1-forms `η_1..η_l` (`l ≥ 2`), whether `deg η_i + deg η̃_i` reaches its
/// maximum at two or more indices, where `η̃_i` omits `η_i` from the wedge.
pub fn max_attained_twice(ws: &WeightSystem, etas: &[DiffForm]) -> bool {
    assert!(etas.len() >= 2);
    let values: Vec<DegreeValue> = (0..etas.len())
        .map(|i| {
            let n = etas.iter().map(DiffForm::n).max().unwrap_or(0);
            let mut rest = DiffForm::function(&Polynomial::one(n));
            for (j, e) in etas.iter().enumerate() {
                if j != i {
                    rest = wedge(&rest, e);
                }
            }
            deg_w_form(ws, &etas[i]).add(&deg_w_form(ws, &rest))
        })
        .collect();
    let top = values.iter().max().expect("nonempty");
    values.iter().filter(|v| *v == top).count() >= 2
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (idx, p)) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let dx: Vec<String> = idx.iter().map(|i| format!("dx{}", i + 1)).collect();
            if dx.is_empty() {
                write!(f, "({p})")?;
            } else {
                write!(f, "({p}) * {}", dx.join("^"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
