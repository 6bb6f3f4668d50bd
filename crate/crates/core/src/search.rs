//! Leading-form membership and elementary-reduction search.
//!
//! Membership of a leading form in `k[g1, g2]^w` is decided exactly when
//! `deg g1` and `deg g2` are linearly independent over `Z` (products then have
//! pairwise distinct degrees, so no cancellation is possible). When the
//! degrees are proportional, cancellation among products is searched with a
//! bounded ansatz, and failure is reported as inconclusive.

use std::fmt;

use num_traits::{One, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::degree::{semigroup_member, z_independent, DegreeValue, WeightSystem};
use crate::endo::Endo3;
use crate::error::{Error, Result};
use crate::linalg::Eliminator;
use crate::poly::{Coeff, Monomial, Polynomial};
use crate::univariate::BiPoly;

/// Why a search returned nothing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Reason {
    /// The target degree is not in the semigroup of the generator degrees.
    SemigroupObstruction,
    /// Generator degrees are independent, so membership reduces to a single
    /// proportionality test of leading forms, which fails.
    LeadingFormObstruction,
    /// A degree relation required by the sought structure fails.
    DegreeShape,
    /// The bounded search found nothing; not a proof of absence.
    LimitsExhausted,
}

impl Reason {
    pub fn is_rigorous(self) -> bool {
        self != Reason::LimitsExhausted
    }

    pub fn tag(self) -> &'static str {
        match self {
            Reason::SemigroupObstruction => "semigroup-obstruction",
            Reason::LeadingFormObstruction => "leading-form-obstruction",
            Reason::DegreeShape => "degree-shape",
            Reason::LimitsExhausted => "limits-exhausted",
        }
    }
}

impl Serialize for Reason {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A tagged negative search result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Absence {
    pub reason: Reason,
    pub detail: String,
}

impl Absence {
    pub fn new(reason: Reason, detail: impl Into<String>) -> Self {
        Absence { reason, detail: detail.into() }
    }

    pub fn is_rigorous(&self) -> bool {
        self.reason.is_rigorous()
    }
}

impl Serialize for Absence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Inner<'a> {
            reason: Reason,
            detail: &'a str,
        }
        let mut m = s.serialize_map(Some(1))?;
        m.serialize_entry("absent", &Inner { reason: self.reason, detail: &self.detail })?;
        m.end()
    }
}

impl fmt::Display for Absence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.reason, self.detail)
    }
}

pub type Found<T> = std::result::Result<T, Absence>;

/// Effort bounds for the non-rigorous parts of the search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchLimits {
    /// Number of ansatz enlargements, and the divisor of the bidegree budget.
    pub max_cancellation_rounds: u32,
    /// Cap on `i + j` for products `g1^i g2^j`; `None` selects the degree
    /// rule `S-degree ≤ deg target + 4·max(deg g1, deg g2)`.
    pub max_bidegree: Option<u32>,
    /// Cap on scalar candidates and Newton rounds per branch, in units of 8.
    pub max_candidates: u32,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_cancellation_rounds: 8, max_bidegree: None, max_candidates: 8 }
    }
}

impl SearchLimits {
    /// Parse `key=value` pairs separated by commas; keys are `rounds`,
    /// `bidegree` and `candidates`. Unspecified keys keep `self`'s values.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Precondition(format!("limit override '{part}' is not key=value")))?;
            let v: u32 = v
                .trim()
                .parse()
                .ok()
                .filter(|x| *x > 0)
                .ok_or_else(|| Error::Precondition(format!("limit '{k}' needs a positive integer")))?;
            match k.trim() {
                "rounds" => self.max_cancellation_rounds = v,
                "bidegree" => self.max_bidegree = Some(v),
                "candidates" => self.max_candidates = v,
                other => return Err(Error::Precondition(format!("unknown limit '{other}'"))),
            }
        }
        Ok(self)
    }

    /// Double every bound; used when retrying an inconclusive search.
    pub fn escalate(self) -> Self {
        SearchLimits {
            max_cancellation_rounds: self.max_cancellation_rounds * 2,
            max_bidegree: self.max_bidegree.map(|b| b * 2),
            max_candidates: self.max_candidates * 2,
        }
    }

    pub(crate) fn newton_rounds(&self) -> usize {
        8 * self.max_candidates as usize
    }
}

/// All `(i, j)` with `i·d1 + j·d2 = d`, in increasing `i`.
pub fn pairs_with_degree(d: &DegreeValue, d1: &DegreeValue, d2: &DegreeValue) -> Vec<(u32, u32)> {
    if d.is_bottom() || !d1.is_positive() || !d2.is_positive() {
        return Vec::new();
    }
    if z_independent(d1, d2).expect("finite degrees") {
        return semigroup_member(d, d1, d2).map(|(p, q)| vec![(p as u32, q as u32)]).unwrap_or_default();
    }
    let k = d1.leading_index().expect("positive");
    let mut out = Vec::new();
    let mut i = 0i64;
    loop {
        let rest = d.sub(&d1.scale(i));
        if rest.comps()[k] < 0 {
            break;
        }
        if let Some(j) = rest.multiple_of(d2) {
            if j >= 0 {
                out.push((i as u32, j as u32));
            }
        } else if rest.is_zero_vec() {
            out.push((i as u32, 0));
        }
        i += 1;
    }
    out
}

/// A representation `h = Σ c_ij g1h^i g2h^j` for homogeneous inputs.
pub fn homogeneous_membership(ws: &WeightSystem, h: &Polynomial, g1h: &Polynomial, g2h: &Polynomial) -> Result<Option<BiPoly>> {
    for p in [h, g1h, g2h] {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !p.is_homogeneous(ws) {
            return Err(Error::NotHomogeneous);
        }
    }
    let pairs = pairs_with_degree(&h.deg(ws)?, &g1h.deg(ws)?, &g2h.deg(ws)?);
    Ok(solve_products(h, g1h, g2h, &pairs, None).map(|c| BiPoly::from_coeffs(g1h.clone(), g2h.clone(), c)))
}

/// Solve `Σ c_p g1^i g2^j = h` on the monomials present. With a `floor`, only
/// monomials of degree at least `floor` are matched and products are
/// truncated accordingly.
fn solve_products(
    h: &Polynomial,
    g1: &Polynomial,
    g2: &Polynomial,
    pairs: &[(u32, u32)],
    truncation: Option<(&WeightSystem, &DegreeValue)>,
) -> Option<Vec<((u32, u32), Coeff)>> {
    if pairs.is_empty() {
        return None;
    }
    let cols: Vec<Polynomial> = match truncation {
        None => {
            let max_i = pairs.iter().map(|p| p.0).max().unwrap_or(0);
            let max_j = pairs.iter().map(|p| p.1).max().unwrap_or(0);
            let p1 = powers(g1, max_i);
            let p2 = powers(g2, max_j);
            pairs.iter().map(|&(i, j)| &p1[i as usize] * &p2[j as usize]).collect()
        }
        Some((ws, floor)) => pairs.iter().map(|&(i, j)| truncated_product(ws, g1, i, g2, j, floor)).collect(),
    };
    let target = match truncation {
        None => h.clone(),
        Some((ws, floor)) => h.truncate_ge(ws, floor),
    };
    let mut rows: std::collections::BTreeSet<Monomial> = target.terms().map(|(m, _)| *m).collect();
    for c in &cols {
        rows.extend(c.terms().map(|(m, _)| *m));
    }
    let mut el = Eliminator::new(cols.len());
    for m in rows.iter().rev() {
        let row: Vec<Coeff> = cols.iter().map(|c| c.coeff(m)).collect();
        el.push(&row, &target.coeff(m));
        if !el.is_consistent() {
            return None;
        }
    }
    let x = el.solution()?;
    Some(pairs.iter().copied().zip(x).filter(|(_, c)| !c.is_zero()).collect())
}

fn powers(g: &Polynomial, k: u32) -> Vec<Polynomial> {
    let mut out = vec![Polynomial::one(g.n())];
    for _ in 0..k {
        let next = out.last().expect("nonempty") * g;
        out.push(next);
    }
    out
}

/// `g1^i g2^j` restricted to terms of degree at least `floor`; intermediate
/// products drop terms that cannot reach `floor`.
pub fn truncated_product(ws: &WeightSystem, g1: &Polynomial, i: u32, g2: &Polynomial, j: u32, floor: &DegreeValue) -> Polynomial {
    let d1 = g1.degw(ws);
    let d2 = g2.degw(ws);
    let n = g1.n().max(g2.n());
    let mut acc = Polynomial::one(n);
    let (mut ri, mut rj) = (i, j);
    while ri > 0 || rj > 0 {
        let next = if ri > 0 {
            ri -= 1;
            g1
        } else {
            rj -= 1;
            g2
        };
        let rest = d1.scale(ri as i64).add(&d2.scale(rj as i64));
        acc = acc.mul_ge(next, ws, &floor.sub(&rest));
    }
    acc.truncate_ge(ws, floor)
}

/// Find `ψ ∈ k[g1, g2]` with `deg(r − ψ) < deg r`, trying homogeneous
/// membership of `r^w` first and then, if `expand`, cancellation ansätze.
fn reduce_once(ws: &WeightSystem, r: &Polynomial, g1: &Polynomial, g2: &Polynomial, limits: &SearchLimits, expand: bool) -> Found<BiPoly> {
    let dr = r.degw(ws);
    let d1 = g1.degw(ws);
    let d2 = g2.degw(ws);
    let lead = r.lf(ws);
    let pairs = pairs_with_degree(&dr, &d1, &d2);
    if let Some(c) = solve_products(&lead, &g1.lf(ws), &g2.lf(ws), &pairs, None) {
        return Ok(BiPoly::from_coeffs(g1.clone(), g2.clone(), c));
    }
    if z_independent(&d1, &d2).expect("finite degrees") {
        return Err(if pairs.is_empty() {
            Absence::new(Reason::SemigroupObstruction, format!("{dr} is not in the semigroup generated by {d1} and {d2}"))
        } else {
            Absence::new(Reason::LeadingFormObstruction, format!("leading form of degree {dr} is not a product of generator leading forms"))
        });
    }
    if !expand {
        return Err(Absence::new(Reason::LimitsExhausted, "leading form not in the algebra of generator leading forms"));
    }
    let rounds = limits.max_cancellation_rounds.max(1);
    let k = d1.leading_index().expect("positive");
    let (a, b) = (d1.comps()[k], d2.comps()[k]);
    let base = dr.comps()[k];
    let mut tried = 0usize;
    for t in 1..=rounds {
        let pairs: Vec<(u32, u32)> = match limits.max_bidegree {
            Some(cap) => {
                let cap = (cap * t).div_ceil(rounds);
                (0..=cap).flat_map(|i| (0..=cap - i).map(move |j| (i, j))).collect()
            }
            None => {
                let budget = base + (4 * a.max(b) * t as i64 + rounds as i64 - 1) / rounds as i64;
                let mut v = Vec::new();
                for i in 0..=(budget / a) {
                    for j in 0..=((budget - i * a) / b) {
                        v.push((i as u32, j as u32));
                    }
                }
                v
            }
        };
        let pairs: Vec<(u32, u32)> = pairs
            .into_iter()
            .filter(|&(i, j)| d1.scale(i as i64).add(&d2.scale(j as i64)) >= dr)
            .collect();
        if pairs.len() == tried {
            continue;
        }
        tried = pairs.len();
        if let Some(c) = solve_products(r, g1, g2, &pairs, Some((ws, &dr))) {
            return Ok(BiPoly::from_coeffs(g1.clone(), g2.clone(), c));
        }
    }
    Err(Absence::new(Reason::LimitsExhausted, format!("no cancellation ansatz within {rounds} rounds")))
}

/// A witness `φ ∈ k[gens]` with `deg(target − φ) < deg target`, improved by
/// greedy peeling while leading forms keep reducing.
pub fn leading_membership_search(ws: &WeightSystem, target: &Polynomial, gens: (&Polynomial, &Polynomial), limits: &SearchLimits) -> Found<BiPoly> {
    if target.is_zero() {
        return Err(Absence::new(Reason::DegreeShape, "zero target"));
    }
    let first = reduce_once(ws, target, gens.0, gens.1, limits, true)?;
    Ok(peel(ws, target, gens, first))
}

const PEEL_CAP: usize = 64;

fn peel(ws: &WeightSystem, target: &Polynomial, gens: (&Polynomial, &Polynomial), first: BiPoly) -> BiPoly {
    let mut acc = first;
    let mut residual = target - &acc.value();
    for _ in 0..PEEL_CAP {
        if residual.is_zero() {
            break;
        }
        match reduce_once(ws, &residual, gens.0, gens.1, &SearchLimits::default(), false) {
            Ok(step) => {
                residual = &residual - &step.value();
                for (k, c) in step.coeffs() {
                    acc.add(*k, c.clone());
                }
            }
            Err(_) => break,
        }
    }
    acc
}

/// An exact representation `target = φ(g1, g2)`.
pub fn representation(ws: &WeightSystem, target: &Polynomial, gens: (&Polynomial, &Polynomial), limits: &SearchLimits) -> Found<BiPoly> {
    let mut acc = BiPoly::new(gens.0.clone(), gens.1.clone());
    let mut residual = target.clone();
    let cap = PEEL_CAP * 4;
    for _ in 0..cap {
        if residual.is_zero() {
            return Ok(acc);
        }
        let step = reduce_once(ws, &residual, gens.0, gens.1, limits, true)?;
        residual = &residual - &step.value();
        for (k, c) in step.coeffs() {
            acc.add(*k, c.clone());
        }
    }
    Err(Absence::new(Reason::LimitsExhausted, "representation did not terminate within the peel cap"))
}

/// Coefficients `c_k` with `h = Σ c_k g^k`; decided exactly, since a single
/// generator admits no leading-form cancellation.
pub fn single_membership(ws: &WeightSystem, h: &Polynomial, g: &Polynomial) -> Option<Vec<Coeff>> {
    let dg = g.degw(ws);
    if dg.is_bottom() {
        return None;
    }
    let mut coeffs: Vec<Coeff> = Vec::new();
    let mut residual = h.clone();
    let glf = g.lf(ws);
    while !residual.is_zero() {
        let dr = residual.degw(ws);
        let k = if dr.is_zero_vec() {
            0
        } else if dg.is_zero_vec() {
            return None;
        } else {
            dr.multiple_of(&dg).filter(|k| *k > 0)?
        };
        let c = residual.lf(ws).proportional_to(&glf.pow(k as u32))?;
        residual = &residual - &g.pow(k as u32).scale(&c);
        if coeffs.len() <= k as usize {
            coeffs.resize(k as usize + 1, Coeff::zero());
        }
        coeffs[k as usize] += c;
    }
    Some(coeffs)
}

/// `φ` is added to component `index` (0-based); `phi.gens` are the other two
/// components in increasing index order.
#[derive(Clone, Debug)]
pub struct ElementaryStep {
    pub index: usize,
    pub phi: BiPoly,
    /// Degrees of component `index` before and after the step.
    pub degree_before: DegreeValue,
    pub degree_after: DegreeValue,
}

impl ElementaryStep {
    /// The other two indices, in increasing order.
    pub fn others(&self) -> (usize, usize) {
        others(self.index)
    }

    /// `F∘E` for the elementary `E: x_l ↦ x_l + φ(x_j, x_l')`.
    pub fn apply(&self, f: &Endo3) -> Endo3 {
        let mut out = f.clone();
        out.f[self.index] = &f.f[self.index] + &self.phi.value();
        out
    }

    /// `φ` as a polynomial in the ambient variables `x_j, x_l'`.
    pub fn phi_in_variables(&self) -> Polynomial {
        let (j, l) = self.others();
        self.phi.with_gens(Polynomial::var(3, j), Polynomial::var(3, l)).value()
    }
}

pub(crate) fn others(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Scan `i = 1, 2, 3` for an elementary reduction. Leading-form membership
/// is tried on every index before any cancellation search, so a cheap hit at
/// a later index wins over an expensive one at an earlier index.
pub fn find_elementary_reduction(ws: &WeightSystem, f: &Endo3, limits: &SearchLimits) -> Result<Found<ElementaryStep>> {
    if !f.is_independent() {
        return Err(Error::Dependent);
    }
    let degs = f.degrees(ws);
    let mut pending = Vec::new();
    let mut reasons = Vec::new();
    for i in 0..3 {
        let (j, l) = others(i);
        match reduce_once(ws, &f.f[i], &f.f[j], &f.f[l], limits, false) {
            Ok(first) => return Ok(Ok(finish_step(ws, f, i, first, &degs[i]))),
            Err(a) if a.is_rigorous() => reasons.push((i, a)),
            Err(_) => pending.push(i),
        }
    }
    for &i in &pending {
        let (j, l) = others(i);
        match reduce_once(ws, &f.f[i], &f.f[j], &f.f[l], limits, true) {
            Ok(first) => return Ok(Ok(finish_step(ws, f, i, first, &degs[i]))),
            Err(a) => reasons.push((i, a)),
        }
    }
    let reason = if pending.is_empty() {
        if reasons.iter().all(|(_, a)| a.reason == Reason::SemigroupObstruction) {
            Reason::SemigroupObstruction
        } else {
            Reason::LeadingFormObstruction
        }
    } else {
        Reason::LimitsExhausted
    };
    // Per-index tags are repeated only where they differ from the overall one.
    let detail: Vec<String> = reasons
        .iter()
        .map(|(i, a)| if a.reason == reason { format!("f{}: {}", i + 1, a.detail) } else { format!("f{}: {a}", i + 1) })
        .collect();
    Ok(Err(Absence::new(reason, detail.join("; "))))
}

fn finish_step(ws: &WeightSystem, f: &Endo3, i: usize, first: BiPoly, before: &DegreeValue) -> ElementaryStep {
    let (j, l) = others(i);
    let approx = peel(ws, &f.f[i], (&f.f[j], &f.f[l]), first);
    let mut phi = BiPoly::new(f.f[j].clone(), f.f[l].clone());
    for (k, c) in approx.coeffs() {
        phi.add(*k, -c.clone());
    }
    let after = (&f.f[i] + &phi.value()).degw(ws);
    ElementaryStep { index: i, phi, degree_before: before.clone(), degree_after: after }
}

/// Coprime `(p, q)` and `scalar` with `gw^p = scalar · fw^q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledPair {
    pub p: u32,
    pub q: u32,
    pub scalar: Coeff,
}

pub fn find_scaled_pair(ws: &WeightSystem, fw: &Polynomial, gw: &Polynomial) -> Option<ScaledPair> {
    if fw.is_zero() || gw.is_zero() || !fw.is_homogeneous(ws) || !gw.is_homogeneous(ws) {
        return None;
    }
    let (df, dg) = (fw.degw(ws), gw.degw(ws));
    if !df.is_positive() || !dg.is_positive() || z_independent(&df, &dg).ok()? {
        return None;
    }
    // q·deg f = p·deg g.
    let (q, p) = crate::degree::proportionality(&df, &dg)?;
    let (p, q) = (p as u32, q as u32);
    let scalar = gw.pow(p).proportional_to(&fw.pow(q))?;
    Some(ScaledPair { p, q, scalar })
}

/// `c` with `deg(h1 + c·h2) < deg h1`, when the leading forms are proportional.
pub fn cancellation_coefficient(ws: &WeightSystem, h1: &Polynomial, h2: &Polynomial) -> Option<Coeff> {
    if h1.is_zero() || h2.is_zero() {
        return None;
    }
    let r = h1.lf(ws).proportional_to(&h2.lf(ws))?;
    Some(-r)
}

/// `(κ, h)` with `H = κ·h^k` and `h` monic, for nonzero `H`.
pub fn root_up_to_scalar(big_h: &Polynomial, k: u32) -> Option<(Coeff, Polynomial)> {
    let (lm, lc) = big_h.terms().next_back().map(|(m, c)| (*m, c.clone()))?;
    if k == 1 {
        return Some((lc.clone(), big_h.scale(&(Coeff::one() / &lc))));
    }
    let exps: Vec<u16> = lm.exps().iter().map(|e| e / k as u16).collect();
    if lm.exps().iter().any(|e| e % k as u16 != 0) {
        return None;
    }
    let n = big_h.n();
    let h0 = Monomial::new(&exps);
    let h0_pow = Monomial::new(&exps.iter().map(|e| e * (k as u16 - 1)).collect::<Vec<_>>());
    let monic = big_h.scale(&(Coeff::one() / &lc));
    let mut h = Polynomial::term(h0, Coeff::one()).with_arity(n);
    let kc = Coeff::from_integer(k.into());
    for _ in 0..(4 * big_h.num_terms() + 8) {
        let r = &monic - &h.pow(k);
        let Some((rm, rc)) = r.terms().next_back().map(|(m, c)| (*m, c.clone())) else {
            return Some((lc, h));
        };
        let t = rm.div(&h0_pow)?;
        if t >= h0 {
            return None;
        }
        h.add_term(t, rc / &kc);
    }
    None
}
