//! Polynomials `Φ = Σ φ_i y^i` over `k[x]` viewed at a substitution `y = g`,
//! and two-generator representations `φ = Σ c_ij f^i g^j`.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::degree::{DegreeValue, WeightSystem};
use crate::error::{Error, Result};
use crate::forms::{deg_w_form, differential, wedge, wedge_differentials};
use crate::poly::{Coeff, Monomial, Polynomial};

/// `Σ φ_i y^i` with no zero coefficients stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxPoly {
    n: usize,
    coeffs: BTreeMap<u32, Polynomial>,
}

impl AuxPoly {
    pub fn zero(n: usize) -> Self {
        AuxPoly { n, coeffs: BTreeMap::new() }
    }

    pub fn from_coeffs(n: usize, coeffs: impl IntoIterator<Item = (u32, Polynomial)>) -> Self {
        let mut out = AuxPoly::zero(n);
        for (i, p) in coeffs {
            out.add_coeff(i, &p);
        }
        out
    }

    fn add_coeff(&mut self, i: u32, p: &Polynomial) {
        let slot = self.coeffs.entry(i).or_insert_with(|| Polynomial::zero(self.n));
        *slot = &*slot + p;
        if slot.is_zero() {
            self.coeffs.remove(&i);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: u32) -> Polynomial {
        self.coeffs.get(&i).cloned().unwrap_or_else(|| Polynomial::zero(self.n))
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Polynomial)> {
        self.coeffs.iter().map(|(i, p)| (*i, p))
    }

    /// Degree in `y`; `None` for zero.
    pub fn y_degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    /// `dΦ/dy`.
    pub fn derivative(&self) -> AuxPoly {
        let mut out = AuxPoly::zero(self.n);
        for (&i, p) in &self.coeffs {
            if i > 0 {
                out.coeffs.insert(i - 1, p.scale(&Coeff::from_integer(i.into())));
            }
        }
        out
    }

    pub fn nth_derivative(&self, k: u32) -> AuxPoly {
        (0..k).fold(self.clone(), |acc, _| acc.derivative())
    }
}

/// `Φ(g) = Σ φ_i g^i` by Horner's rule.
pub fn eval_aux(phi: &AuxPoly, g: &Polynomial) -> Polynomial {
    let n = phi.n.max(g.n());
    let Some(top) = phi.y_degree() else {
        return Polynomial::zero(n);
    };
    let mut acc = Polynomial::zero(n);
    for i in (0..=top).rev() {
        acc = &(&acc * g) + &phi.coeff(i);
    }
    acc
}

fn check_nonzero(phi: &AuxPoly, g: &Polynomial) -> Result<()> {
    if phi.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(())
}

/// `deg_w^g Φ = max_i deg_w(φ_i g^i)`.
pub fn aux_degree(ws: &WeightSystem, phi: &AuxPoly, g: &Polynomial) -> Result<DegreeValue> {
    check_nonzero(phi, g)?;
    let dg = g.deg(ws)?;
    let mut best = DegreeValue::Bottom;
    for (&i, p) in &phi.coeffs {
        let d = p.deg(ws)?.add(&dg.scale(i as i64));
        best = DegreeValue::max(&best, &d);
    }
    Ok(best)
}

/// `Φ^{w,g}`: the leading forms of the coefficients attaining `deg_w^g Φ`.
pub fn aux_leading(ws: &WeightSystem, phi: &AuxPoly, g: &Polynomial) -> Result<AuxPoly> {
    let top = aux_degree(ws, phi, g)?;
    let dg = g.degw(ws);
    let mut out = AuxPoly::zero(phi.n);
    for (&i, p) in &phi.coeffs {
        if p.degw(ws).add(&dg.scale(i as i64)) == top {
            out.coeffs.insert(i, p.lf(ws));
        }
    }
    Ok(out)
}

/// `m_w^g(Φ)`: the least `i` with `deg_w^g Φ^(i) = deg_w Φ^(i)(g)`.
pub fn aux_multiplicity(ws: &WeightSystem, phi: &AuxPoly, g: &Polynomial) -> Result<u32> {
    check_nonzero(phi, g)?;
    let mut cur = phi.clone();
    let mut i = 0;
    loop {
        // Φ^(deg_y Φ) is a nonzero constant in y, so this terminates.
        if aux_degree(ws, &cur, g)? == eval_aux(&cur, g).degw(ws) {
            return Ok(i);
        }
        cur = cur.derivative();
        i += 1;
    }
}

/// Order of `root` as a root of `Φ` in `y`, by repeated division by
/// `y − root` over `k[x]`.
pub fn root_multiplicity(phi: &AuxPoly, root: &Polynomial) -> u32 {
    assert!(!phi.is_zero());
    let mut cur = phi.clone();
    let mut m = 0;
    loop {
        let top = cur.y_degree().expect("nonzero");
        if top == 0 {
            return m;
        }
        // Synthetic division: b_{k-1} = a_k + root·b_k.
        let mut quotient = AuxPoly::zero(cur.n.max(root.n()));
        let mut carry = Polynomial::zero(quotient.n);
        for k in (1..=top).rev() {
            carry = &cur.coeff(k) + &(&carry * root);
            quotient.add_coeff(k - 1, &carry);
        }
        let remainder = &cur.coeff(0) + &(&carry * root);
        if !remainder.is_zero() {
            return m;
        }
        m += 1;
        cur = quotient;
    }
}

/// `Σ c_ij f^i g^j` over an ordered generator pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiPoly {
    gens: (Polynomial, Polynomial),
    coeffs: BTreeMap<(u32, u32), Coeff>,
}

impl BiPoly {
    pub fn new(f: Polynomial, g: Polynomial) -> Self {
        BiPoly { gens: (f, g), coeffs: BTreeMap::new() }
    }

    pub fn from_coeffs(f: Polynomial, g: Polynomial, coeffs: impl IntoIterator<Item = ((u32, u32), Coeff)>) -> Self {
        let mut out = BiPoly::new(f, g);
        for (k, c) in coeffs {
            out.add(k, c);
        }
        out
    }

    /// Rename the variables of a polynomial `P(y1, y2)` to the generators.
    pub fn from_poly2(f: Polynomial, g: Polynomial, p: &Polynomial) -> Self {
        assert!(p.n() <= 2);
        let coeffs = p.terms().map(|(m, c)| ((m.exp(0) as u32, if p.n() > 1 { m.exp(1) as u32 } else { 0 }), c.clone()));
        BiPoly::from_coeffs(f, g, coeffs.collect::<Vec<_>>())
    }

    pub fn add(&mut self, k: (u32, u32), c: Coeff) {
        let slot = self.coeffs.entry(k).or_insert_with(Coeff::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn gens(&self) -> (&Polynomial, &Polynomial) {
        (&self.gens.0, &self.gens.1)
    }

    pub fn coeffs(&self) -> &BTreeMap<(u32, u32), Coeff> {
        &self.coeffs
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Same coefficients over a different generator pair.
    pub fn with_gens(&self, f: Polynomial, g: Polynomial) -> BiPoly {
        BiPoly { gens: (f, g), coeffs: self.coeffs.clone() }
    }

    /// The abstract polynomial `Σ c_ij y1^i y2^j`.
    pub fn to_poly2(&self) -> Polynomial {
        Polynomial::from_terms(
            2,
            self.coeffs.iter().map(|(&(i, j), c)| (Monomial::new(&[i as u16, j as u16]), c.clone())),
        )
    }

    /// Exact value `Σ c_ij f^i g^j`.
    pub fn value(&self) -> Polynomial {
        let n = self.gens.0.n().max(self.gens.1.n());
        if self.coeffs.is_empty() {
            return Polynomial::zero(n);
        }
        let p = self.to_poly2();
        p.compose(&[self.gens.0.clone(), self.gens.1.clone()]).expect("two generators")
    }

    /// `Φ = Σ c_ij f^i y^j ∈ k[f][y]`, so that `Φ(g) = value()`.
    pub fn to_aux(&self) -> AuxPoly {
        let n = self.gens.0.n().max(self.gens.1.n());
        let mut out = AuxPoly::zero(n);
        for (&(i, j), c) in &self.coeffs {
            out.add_coeff(j, &self.gens.0.pow(i).scale(c));
        }
        out
    }

    /// The largest `i + j` among stored exponents.
    pub fn bidegree(&self) -> u32 {
        self.coeffs.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }
}

/// `deg^S φ`: the largest `deg_w f^i g^j` with `c_ij ≠ 0`.
pub fn deg_s(ws: &WeightSystem, phi: &BiPoly) -> Result<DegreeValue> {
    if phi.coeffs.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let d1 = phi.gens.0.deg(ws)?;
    let d2 = phi.gens.1.deg(ws)?;
    Ok(phi
        .coeffs
        .keys()
        .map(|&(i, j)| d1.scale(i as i64).add(&d2.scale(j as i64)))
        .max()
        .expect("nonempty"))
}

/// Outcome of evaluating the weighted inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated,
    /// `ω ∧ dg = 0` and `m ≥ 1`, so the right side is `−∞` and the
    /// inequality has no content.
    VacuousFalsePrecondition,
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Verdict::Holds => s.serialize_bool(true),
            Verdict::Violated => s.serialize_bool(false),
            Verdict::VacuousFalsePrecondition => s.serialize_str("vacuous-false-precondition"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityReport {
    pub lhs: DegreeValue,
    pub rhs: DegreeValue,
    pub aux_degree: DegreeValue,
    pub multiplicity: u32,
    pub deg_omega: DegreeValue,
    pub deg_omega_dg: DegreeValue,
    pub deg_g: DegreeValue,
    pub holds: Verdict,
}

/// Evaluate `deg Φ(g) ≥ deg_w^g Φ + m (deg ω∧dg − deg ω − deg g)` with
/// `ω = df_1 ∧ … ∧ df_r`. The coefficients of `Φ` are assumed to lie in
/// `k[fs]`.
pub fn su_inequality_report(ws: &WeightSystem, fs: &[Polynomial], phi: &AuxPoly, g: &Polynomial) -> Result<InequalityReport> {
    check_nonzero(phi, g)?;
    if fs.is_empty() || fs.len() > ws.n() {
        return Err(Error::Precondition("need between 1 and n generators".into()));
    }
    let omega = wedge_differentials(fs);
    if omega.is_zero() {
        return Err(Error::Dependent);
    }
    let deg_omega = deg_w_form(ws, &omega);
    let deg_omega_dg = deg_w_form(ws, &wedge(&omega, &differential(g)));
    let deg_g = g.deg(ws)?;
    let aux = aux_degree(ws, phi, g)?;
    let m = aux_multiplicity(ws, phi, g)?;
    let lhs = eval_aux(phi, g).degw(ws);
    // With ω∧dg = 0 the correction term is 0 when m = 0 and −∞ otherwise.
    if deg_omega_dg.is_bottom() && m > 0 {
        return Ok(InequalityReport {
            lhs,
            rhs: DegreeValue::Bottom,
            aux_degree: aux,
            multiplicity: m,
            deg_omega,
            deg_omega_dg,
            deg_g,
            holds: Verdict::VacuousFalsePrecondition,
        });
    }
    let rhs = if m == 0 { aux.clone() } else { aux.add(&deg_omega_dg.sub(&deg_omega).sub(&deg_g).scale(m as i64)) };
    let holds = if lhs >= rhs { Verdict::Holds } else { Verdict::Violated };
    Ok(InequalityReport { lhs, rhs, aux_degree: aux, multiplicity: m, deg_omega, deg_omega_dg, deg_g, holds })
}

/// Exhaustive check, for `2 ≤ p < q ≤ bound` coprime, of:
/// `pq − p − q > 0`; `pq − p − q ≤ q ⇒ p = 2, q odd ≥ 3`;
/// `pq − p − q ≤ p ⇒ (p, q) = (2, 3)`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct IntegerClaims {
    pub pairs_checked: u64,
    pub violations: Vec<(i64, i64)>,
}

pub fn check_integer_claims(bound: i64) -> IntegerClaims {
    let mut out = IntegerClaims { pairs_checked: 0, violations: Vec::new() };
    for p in 2..=bound {
        for q in (p + 1)..=bound {
            if p.gcd(&q) != 1 {
                continue;
            }
            out.pairs_checked += 1;
            let v = p * q - p - q;
            let ok = v > 0
                && (v > q || (p == 2 && q % 2 == 1 && q >= 3))
                && (v > p || (p, q) == (2, 3));
            if !ok {
                out.violations.push((p, q));
            }
        }
    }
    out
}

/// The constant `c` as an element of `k[x][y]`.
pub fn aux_constant(n: usize, c: Coeff) -> AuxPoly {
    AuxPoly::from_coeffs(n, [(0, Polynomial::constant(n, c))])
}

/// `y^k` with unit coefficient.
pub fn aux_monomial(n: usize, k: u32) -> AuxPoly {
    AuxPoly::from_coeffs(n, [(k, Polynomial::constant(n, Coeff::one()))])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;
    use crate::text::parse_polynomial;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, 3).unwrap()
    }

    #[test]
    fn degree_and_leading() {
        let ws = WeightSystem::total_degree(3);
        let g = p("x1 + x2^2");
        let phi = aux_monomial(3, 2);
        assert_eq!(aux_degree(&ws, &phi, &g).unwrap(), DegreeValue::from_slice(&[4]));
        let phi = AuxPoly::from_coeffs(3, [(0, p("x1")), (1, p("1"))]);
        let x1 = p("x1");
        assert_eq!(aux_degree(&ws, &phi, &x1).unwrap(), DegreeValue::from_slice(&[1]));
        assert_eq!(aux_leading(&ws, &phi, &x1).unwrap(), phi);
        assert_eq!(eval_aux(&aux_monomial(3, 2), &p("x1 + x2")), p("x1^2 + 2*x1*x2 + x2^2"));
        assert!(aux_degree(&ws, &AuxPoly::zero(3), &x1).is_err());
    }

    #[test]
    fn multiplicity_examples() {
        let ws = WeightSystem::total_degree(3);
        let g = p("x2 + x1");
        let phi = AuxPoly::from_coeffs(3, [(0, -&g), (1, p("1"))]);
        assert_eq!(aux_multiplicity(&ws, &phi, &g).unwrap(), 1);
        let sq = AuxPoly::from_coeffs(3, [(0, g.pow(2)), (1, g.scale(&q(-2))), (2, p("1"))]);
        assert_eq!(aux_multiplicity(&ws, &sq, &g).unwrap(), 2);
        assert_eq!(root_multiplicity(&aux_leading(&ws, &sq, &g).unwrap(), &g.lf(&ws)), 2);
        let plain = AuxPoly::from_coeffs(3, [(1, p("x3"))]);
        assert_eq!(aux_multiplicity(&ws, &plain, &g).unwrap(), 0);
    }

    #[test]
    fn deg_s_reads_coefficients() {
        let ws = WeightSystem::total_degree(3);
        let f = p("x1^3");
        let g = p("x1^2");
        let phi = BiPoly::from_coeffs(f.clone(), g.clone(), [((2, 0), q(1)), ((0, 3), q(-1))]);
        assert_eq!(deg_s(&ws, &phi).unwrap(), DegreeValue::from_slice(&[6]));
        assert!(phi.value().is_zero());
        let fg = BiPoly::from_coeffs(f, g, [((1, 1), q(1))]);
        assert_eq!(deg_s(&ws, &fg).unwrap(), DegreeValue::from_slice(&[5]));
        assert_eq!(fg.to_aux().coeff(1), p("x1^3"));
    }

    #[test]
    fn inequality_small_case() {
        let ws = WeightSystem::total_degree(3);
        let phi = AuxPoly::from_coeffs(3, [(0, p("x1 - x2")), (1, p("1"))]);
        let r = su_inequality_report(&ws, &[p("x1")], &phi, &p("x2")).unwrap();
        assert_eq!(r.holds, Verdict::Holds);
        assert_eq!(r.lhs, DegreeValue::from_slice(&[1]));
        let at_floor = su_inequality_report(&ws, &[p("x1")], &phi, &p("x1^2")).unwrap();
        assert_eq!((at_floor.multiplicity, at_floor.holds), (0, Verdict::Holds));
        let root = AuxPoly::from_coeffs(3, [(0, p("-x1^2")), (1, p("1"))]);
        let dep = su_inequality_report(&ws, &[p("x1")], &root, &p("x1^2 + 1")).unwrap();
        assert_eq!((dep.multiplicity, dep.holds), (1, Verdict::VacuousFalsePrecondition));
    }

    #[test]
    fn integer_claims() {
        let r = check_integer_claims(50);
        assert!(r.violations.is_empty());
        assert!(r.pairs_checked > 500);
    }
}
