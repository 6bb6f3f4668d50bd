//! Automorphism-level orchestration: tame factors, the reduction loop down to
//! the degree floor `|w|`, triangular factorization at the floor, the Nagata
//! certificate and the seeded tame corpus.
//!
//! Factor lists are read right to left: `recompose([L1, …, Lk])` is the ring
//! composition `Lk∘…∘L1`, i.e. `Lk.then(…).then(L1)`.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::degree::{half, semigroup_member, z_independent, DegreeValue, WeightSystem};
use crate::endo::{permutation_map, verify_automorphism, Endo3, PERMUTATIONS};
use crate::error::{Error, Result};
use crate::linalg::invert;
use crate::poly::{Coeff, Monomial, Polynomial};
use crate::search::{find_elementary_reduction, Absence, ElementaryStep, SearchLimits};
use crate::sured::{find_su_reduction, SuStep};
use crate::text::parse_polynomial;

/// An affine map `x ↦ A x + b` or an elementary map `x_l ↦ x_l + φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TameFactor {
    Affine { matrix: [[Coeff; 3]; 3], translation: [Coeff; 3] },
    /// `phi` does not involve `x_index` (0-based).
    Elementary { index: usize, phi: Polynomial },
}

impl TameFactor {
    pub fn identity() -> Self {
        let z = Coeff::zero;
        let o = Coeff::one;
        TameFactor::Affine { matrix: [[o(), z(), z()], [z(), o(), z()], [z(), z(), o()]], translation: [z(), z(), z()] }
    }

    pub fn elementary(index: usize, phi: Polynomial) -> Result<Self> {
        if index > 2 || phi.depends_on(index) {
            return Err(Error::Precondition(format!("elementary factor on x{} must not involve x{}", index + 1, index + 1)));
        }
        Ok(TameFactor::Elementary { index, phi: phi.with_arity(3) })
    }

    pub fn affine(matrix: [[Coeff; 3]; 3], translation: [Coeff; 3]) -> Result<Self> {
        let rows: Vec<Vec<Coeff>> = matrix.iter().map(|r| r.to_vec()).collect();
        if invert(&rows).is_none() {
            return Err(Error::Precondition("affine matrix is singular".into()));
        }
        Ok(TameFactor::Affine { matrix, translation })
    }

    pub fn to_endo(&self) -> Endo3 {
        match self {
            TameFactor::Affine { matrix, translation } => {
                let comp = |i: usize| {
                    let mut p = Polynomial::constant(3, translation[i].clone());
                    for (j, a) in matrix[i].iter().enumerate() {
                        p.add_scaled(&Polynomial::var(3, j), a);
                    }
                    p
                };
                Endo3::new(comp(0), comp(1), comp(2))
            }
            TameFactor::Elementary { index, phi } => {
                let mut e = Endo3::identity();
                e.f[*index] = &e.f[*index] + phi;
                e
            }
        }
    }

    pub fn inverse(&self) -> TameFactor {
        match self {
            TameFactor::Affine { matrix, translation } => {
                let rows: Vec<Vec<Coeff>> = matrix.iter().map(|r| r.to_vec()).collect();
                let inv = invert(&rows).expect("affine factors are invertible");
                let m: [[Coeff; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| inv[i][j].clone()));
                let t: [Coeff; 3] = std::array::from_fn(|i| -(0..3).map(|j| &m[i][j] * &translation[j]).sum::<Coeff>());
                TameFactor::Affine { matrix: m, translation: t }
            }
            TameFactor::Elementary { index, phi } => TameFactor::Elementary { index: *index, phi: -phi },
        }
    }

    pub fn is_identity(&self) -> bool {
        self.to_endo().is_identity()
    }

    /// Recognize an endomorphism that is elementary (or the identity).
    pub fn from_elementary_endo(e: &Endo3) -> Option<TameFactor> {
        let moved: Vec<usize> = (0..3).filter(|&i| e.f[i] != Polynomial::var(3, i)).collect();
        match moved.as_slice() {
            [] => Some(TameFactor::identity()),
            [l] => TameFactor::elementary(*l, &e.f[*l] - &Polynomial::var(3, *l)).ok(),
            _ => None,
        }
    }
}

impl Serialize for TameFactor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(1))?;
        match self {
            TameFactor::Affine { matrix, translation } => {
                #[derive(Serialize)]
                struct A {
                    matrix: Vec<Vec<String>>,
                    translation: Vec<String>,
                }
                let a = A {
                    matrix: matrix.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect(),
                    translation: translation.iter().map(|c| c.to_string()).collect(),
                };
                m.serialize_entry("affine", &a)?;
            }
            TameFactor::Elementary { index, phi } => {
                #[derive(Serialize)]
                struct E {
                    index: usize,
                    phi: String,
                }
                m.serialize_entry("elementary", &E { index: index + 1, phi: phi.to_string() })?;
            }
        }
        m.end()
    }
}

/// `Lk∘…∘L1` for the list `[L1, …, Lk]`.
pub fn recompose(factors: &[TameFactor]) -> Endo3 {
    let mut acc = Endo3::identity();
    for l in factors.iter().rev() {
        acc = acc.then(&l.to_endo());
    }
    acc
}

/// The list whose recomposition inverts `recompose(factors)`.
pub fn inverse_factors(factors: &[TameFactor]) -> Vec<TameFactor> {
    factors.iter().rev().map(TameFactor::inverse).collect()
}

/// Options of the reduction loop.
#[derive(Clone, Copy, Debug)]
pub struct ReduceOptions {
    pub limits: SearchLimits,
    /// Try SU reductions before elementary ones.
    pub su_first: bool,
    /// Safety cap on the number of steps; reaching it yields `Budget`.
    pub max_steps: usize,
    /// Number of limit escalations after an inconclusive failure.
    pub escalations: u32,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions { limits: SearchLimits::default(), su_first: false, max_steps: 10_000, escalations: 2 }
    }
}

#[derive(Clone, Debug)]
pub enum StepResult {
    AtFloor,
    Elementary(ElementaryStep),
    Su(SuStep),
    /// Absence reasons of the elementary and SU searches.
    Stuck(Vec<Absence>),
}

/// One reduction step; `F` must have algebraically independent components.
pub fn reduce_step(ws: &WeightSystem, f: &Endo3, opts: &ReduceOptions) -> Result<StepResult> {
    if ws.n() != 3 {
        return Err(Error::Arity { expected: 3, found: ws.n() });
    }
    if !f.is_independent() {
        return Err(Error::Dependent);
    }
    let d = f.degree(ws);
    if d == *ws.total() {
        return Ok(StepResult::AtFloor);
    }
    if d < *ws.total() {
        return Err(Error::Internal(format!("degree {d} below the floor {}", ws.total())));
    }
    let mut limits = opts.limits;
    for attempt in 0..=opts.escalations {
        let mut reasons = Vec::new();
        for su in [opts.su_first, !opts.su_first] {
            if su {
                match find_su_reduction(ws, f, &limits)? {
                    Ok(step) => return Ok(StepResult::Su(step)),
                    Err(a) => reasons.push(a),
                }
            } else {
                match find_elementary_reduction(ws, f, &limits)? {
                    Ok(step) => return Ok(StepResult::Elementary(step)),
                    Err(a) => reasons.push(a),
                }
            }
        }
        if reasons.iter().all(Absence::is_rigorous) || attempt == opts.escalations {
            return Ok(StepResult::Stuck(reasons));
        }
        limits = limits.escalate();
    }
    unreachable!("the loop returns on its last attempt")
}

#[derive(Clone, Debug)]
pub enum TraceStep {
    Elementary(ElementaryStep),
    Su(SuStep),
}

impl TraceStep {
    /// Factors `M` with `G = F∘recompose(M)`, as elementary maps.
    pub fn forward_factors(&self) -> Vec<TameFactor> {
        match self {
            TraceStep::Elementary(e) => vec![TameFactor::Elementary { index: e.index, phi: e.phi_in_variables() }],
            TraceStep::Su(s) => {
                // G = F∘P∘E1∘E2∘E3∘P⁻¹ = F∘C1∘C2∘C3 with C_i = P∘E_i∘P⁻¹.
                let w = &s.witness;
                let x = |i| Polynomial::var(3, i);
                let e1 = Endo3::new(&(&x(0) + &x(2).pow(2).scale(&w.a)) + &x(2).scale(&w.c), x(1), x(2));
                let e2 = Endo3::new(x(0), &x(1) + &x(2).scale(&w.b), x(2));
                let e3 = Endo3::new(x(0), x(1), &x(2) + &w.phi3_in_variables());
                let p = permutation_map(w.sigma);
                let pinv = permutation_map(crate::endo::inverse_permutation(w.sigma));
                let mut out = Vec::new();
                for e in [e1, e2, e3] {
                    let c = p.then(&e).then(&pinv);
                    let factor = TameFactor::from_elementary_endo(&c).expect("conjugated elementary map");
                    if !factor.is_identity() {
                        out.push(factor);
                    }
                }
                // recompose([C3, C2, C1]) = C1.then(C2).then(C3).
                out.reverse();
                out
            }
        }
    }

    /// Factors `N` with `F = G∘recompose(N)`.
    pub fn inverse_factors(&self) -> Vec<TameFactor> {
        inverse_factors(&self.forward_factors())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Floor,
    Stuck(Vec<Absence>),
    Budget,
}

#[derive(Clone, Debug)]
pub struct ReductionTrace {
    pub origin: Endo3,
    pub weight: WeightSystem,
    pub steps: Vec<TraceStep>,
    pub last: Endo3,
    pub outcome: Outcome,
    /// `deg_w` of the origin and of every step's result.
    pub degrees: Vec<DegreeValue>,
    /// Set by [`factor_tame`].
    pub factors: Option<Vec<TameFactor>>,
}

impl ReductionTrace {
    /// Degrees from the origin through every step.
    pub fn ledger(&self) -> Vec<DegreeValue> {
        self.degrees.clone()
    }

    pub fn ledger_strictly_decreasing(&self) -> bool {
        self.ledger().windows(2).all(|w| w[1] < w[0])
    }

    /// `F = last∘recompose(…)` rebuilt from the steps.
    pub fn replay_origin(&self) -> Endo3 {
        let mut acc = self.last.clone();
        for step in self.steps.iter().rev() {
            acc = acc.then(&recompose(&step.inverse_factors()));
        }
        acc
    }
}

/// Number of SU steps in one trace.
pub fn su_number(trace: &ReductionTrace) -> usize {
    trace.steps.iter().filter(|s| matches!(s, TraceStep::Su(_))).count()
}

/// `SU_w(F;G)` along the traces of both scan orders; the minimum over the
/// traces that reach the floor bounds `SU_w(F)` from above.
#[derive(Clone, Debug)]
pub struct SuNumberReport {
    pub elementary_first: ReductionTrace,
    pub su_first: ReductionTrace,
    pub upper_bound: Option<usize>,
}

pub fn su_number_experiment(ws: &WeightSystem, f: &Endo3, opts: &ReduceOptions) -> Result<SuNumberReport> {
    let elementary_first = reduce_to_floor(ws, f, &ReduceOptions { su_first: false, ..*opts })?;
    let su_first = reduce_to_floor(ws, f, &ReduceOptions { su_first: true, ..*opts })?;
    let upper_bound = [&elementary_first, &su_first].iter().filter(|t| t.outcome == Outcome::Floor).map(|t| su_number(t)).min();
    Ok(SuNumberReport { elementary_first, su_first, upper_bound })
}

pub fn reduce_to_floor(ws: &WeightSystem, f: &Endo3, opts: &ReduceOptions) -> Result<ReductionTrace> {
    let mut cur = f.clone();
    let mut steps = Vec::new();
    let mut degrees = vec![cur.degree(ws)];
    let outcome = loop {
        if steps.len() >= opts.max_steps {
            break Outcome::Budget;
        }
        match reduce_step(ws, &cur, opts)? {
            StepResult::AtFloor => break Outcome::Floor,
            StepResult::Stuck(r) => break Outcome::Stuck(r),
            StepResult::Elementary(e) => {
                cur = e.apply(&cur);
                steps.push(TraceStep::Elementary(e));
                degrees.push(cur.degree(ws));
            }
            StepResult::Su(s) => {
                cur = s.g.clone();
                steps.push(TraceStep::Su(s));
                degrees.push(cur.degree(ws));
            }
        }
    };
    Ok(ReductionTrace { origin: f.clone(), weight: ws.clone(), steps, last: cur, outcome, degrees, factors: None })
}

fn translation_factor(b: &[Coeff; 3]) -> TameFactor {
    let TameFactor::Affine { matrix, .. } = TameFactor::identity() else { unreachable!() };
    TameFactor::Affine { matrix, translation: b.clone() }
}

/// Whether `t` is `(x_{π0}, x_{π1} + φ1(x_{π0}), x_{π2} + φ2(x_{π0}, x_{π1}))`
/// up to relabelling; returns the elementary factors in `recompose` order.
fn triangular_factors(t: &Endo3, order: [usize; 3]) -> Option<Vec<TameFactor>> {
    let mut out = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        let phi = &t.f[i] - &Polynomial::var(3, i);
        if order[k..].iter().any(|&j| phi.depends_on(j)) {
            return None;
        }
        if !phi.is_zero() {
            out.push(TameFactor::Elementary { index: i, phi });
        }
    }
    // t = E_{π2}.then(E_{π1}).then(E_{π0}) = recompose([E_{π0}, E_{π1}, E_{π2}]).
    Some(out)
}

/// Factor an automorphism at the degree floor as affine and triangular parts:
/// strip the translation, divide out the linear part and split the remaining
/// triangular map into elementary factors, ordered by ascending weight.
pub fn triangularize_at_floor(ws: &WeightSystem, f: &Endo3) -> Result<Vec<TameFactor>> {
    let b: [Coeff; 3] = std::array::from_fn(|i| f.f[i].constant_term());
    let shifted = Endo3::new(
        &f.f[0] - &Polynomial::constant(3, b[0].clone()),
        &f.f[1] - &Polynomial::constant(3, b[1].clone()),
        &f.f[2] - &Polynomial::constant(3, b[2].clone()),
    );
    let matrix: [[Coeff; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| shifted.f[i].coeff(&Monomial::var(3, j))));
    let zero = [Coeff::zero(), Coeff::zero(), Coeff::zero()];
    let h = TameFactor::affine(matrix, zero).map_err(|_| Error::Internal("linear part is singular".into()))?;
    let tri = h.inverse().to_endo().then(&shifted);
    let mut by_weight = [0usize, 1, 2];
    by_weight.sort_by(|&i, &j| ws.weight(i).cmp(ws.weight(j)).then(i.cmp(&j)));
    let orders = std::iter::once(by_weight).chain(PERMUTATIONS);
    let es = orders
        .filter_map(|o| triangular_factors(&tri, o))
        .next()
        .ok_or_else(|| Error::Precondition(format!("{f} is not triangular after affine normalization (degree {})", f.degree(ws))))?;
    let translation = translation_factor(&b);
    let mut out = Vec::new();
    if es.is_empty() {
        // F = H.then(T⁻¹) is affine.
        let TameFactor::Affine { matrix, .. } = h else { unreachable!() };
        out.push(TameFactor::Affine { matrix, translation: b });
    } else {
        if !translation.is_identity() {
            out.push(translation);
        }
        out.extend(es);
        out.push(h);
    }
    if recompose(&out) != *f {
        return Err(Error::Internal("triangular factorization does not recompose".into()));
    }
    Ok(out)
}

/// Tame factors of `F`, or the trace's reason for failing.
pub fn factor_tame(ws: &WeightSystem, f: &Endo3, opts: &ReduceOptions) -> Result<ReductionTrace> {
    let mut trace = reduce_to_floor(ws, f, opts)?;
    if trace.outcome != Outcome::Floor {
        return Ok(trace);
    }
    let mut factors = Vec::new();
    for step in &trace.steps {
        factors.extend(step.inverse_factors());
    }
    factors.extend(triangularize_at_floor(ws, &trace.last)?);
    if recompose(&factors) != *f {
        return Err(Error::Internal("tame factors do not recompose to the input".into()));
    }
    trace.factors = Some(factors);
    Ok(trace)
}

impl Serialize for ReductionTrace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Weight {
            r: usize,
            vectors: Vec<Vec<i64>>,
        }
        #[derive(Serialize)]
        struct ElementaryPayload {
            index: usize,
            phi: String,
            component_before: DegreeValue,
            component_after: DegreeValue,
        }
        #[derive(Serialize)]
        struct SuPayload<'a> {
            witness: &'a crate::sured::SuWitness,
            normalized: bool,
        }
        #[derive(Serialize)]
        struct Step<P: Serialize> {
            kind: &'static str,
            payload: P,
            degree_after: DegreeValue,
        }
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("origin", &self.origin)?;
        m.serialize_entry("weight", &Weight { r: self.weight.r(), vectors: self.weight.vectors() })?;
        let steps: Vec<serde_json::Value> = self
            .steps
            .iter()
            .zip(&self.degrees[1..])
            .map(|(st, after)| match st {
                TraceStep::Elementary(e) => serde_json::to_value(Step {
                    kind: "elementary",
                    payload: ElementaryPayload {
                        index: e.index + 1,
                        phi: e.phi_in_variables().to_string(),
                        component_before: e.degree_before.clone(),
                        component_after: e.degree_after.clone(),
                    },
                    degree_after: after.clone(),
                }),
                TraceStep::Su(su) => serde_json::to_value(Step {
                    kind: "su",
                    payload: SuPayload { witness: &su.witness, normalized: true },
                    degree_after: after.clone(),
                }),
            })
            .collect::<std::result::Result<_, _>>()
            .map_err(serde::ser::Error::custom)?;
        m.serialize_entry("steps", &steps)?;
        m.serialize_entry("final", &self.last)?;
        match &self.outcome {
            Outcome::Floor => m.serialize_entry("result", "floor")?,
            Outcome::Budget => m.serialize_entry("result", "budget")?,
            Outcome::Stuck(r) => {
                m.serialize_entry("result", "stuck")?;
                m.serialize_entry("reasons", r)?;
                m.serialize_entry("rigorous", &r.iter().all(Absence::is_rigorous))?;
            }
        }
        m.serialize_entry("su_number", &su_number(self))?;
        if let Some(fs) = &self.factors {
            m.serialize_entry("factors", fs)?;
        }
        m.end()
    }
}

/// Nagata's automorphism.
pub fn nagata() -> Endo3 {
    let p = |s| parse_polynomial(s, 3).expect("fixed text");
    Endo3::new(
        p("x1 - 2*x1*x2*x3 - 2*x2^3 - x1^2*x3^3 - 2*x1*x2^2*x3^2 - x2^4*x3"),
        p("x2 + x1*x3^2 + x2^2*x3"),
        p("x3"),
    )
}

/// `(x1 + 2t x2 − t² x3, x2 − t x3, x3)` with `t = x1 x3 + x2²`.
pub fn nagata_inverse() -> Endo3 {
    let p = |s| parse_polynomial(s, 3).expect("fixed text");
    let t = p("x1*x3 + x2^2");
    let x = |i| Polynomial::var(3, i);
    Endo3::new(
        &(&x(0) + &(&t * &x(1)).scale(&Coeff::from_integer(2.into()))) - &(&t.pow(2) * &x(2)),
        &x(1) - &(&t * &x(2)),
        x(2),
    )
}

/// One rigorous check of the certificate.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub holds: bool,
    pub detail: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateChecks {
    /// `deg F > |w|`.
    pub above_floor: Check,
    /// The three degrees are pairwise linearly independent over `Z`.
    pub pairwise_independent: Check,
    /// No degree lies in the semigroup generated by the other two.
    pub semigroup_obstruction: Check,
    /// No degree is divisible by 2 in `Z^r`.
    pub half_obstruction: Check,
    /// Every multiple of `deg f3` stays below `deg f1` and `deg f2`.
    pub order_obstruction: Check,
}

#[derive(Clone, Debug, Serialize)]
pub struct NagataCertificate {
    pub degrees: [DegreeValue; 3],
    pub total: DegreeValue,
    pub floor: DegreeValue,
    pub checks: CertificateChecks,
    pub inverse_verified: bool,
    pub verdict: String,
}

impl NagataCertificate {
    pub fn all_pass(&self) -> bool {
        let c = &self.checks;
        [&c.above_floor, &c.pairwise_independent, &c.semigroup_obstruction, &c.half_obstruction, &c.order_obstruction]
            .iter()
            .all(|k| k.holds)
            && self.inverse_verified
    }
}

/// Rigorous obstructions to any elementary or SU reduction of Nagata's map
/// under the lexicographic weight `(e1, e2, e3)`.
pub fn certify_nagata() -> NagataCertificate {
    let ws = WeightSystem::lex_unit(3);
    let f = nagata();
    let d = f.degrees(&ws);
    let total = f.degree(&ws);
    let floor = ws.total().clone();
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let indep: Vec<(String, bool)> = pairs
        .iter()
        .map(|&(i, j)| {
            let ok = z_independent(&d[i], &d[j]).unwrap_or(false);
            (format!("deg f{} = {}, deg f{} = {}: independent {ok}", i + 1, d[i], j + 1, d[j]), ok)
        })
        .collect();
    let semigroup: Vec<(String, bool)> = (0..3)
        .map(|i| {
            let (j, l) = crate::search::others(i);
            let ok = semigroup_member(&d[i], &d[j], &d[l]).is_none();
            (format!("deg f{} = {} not in <{}, {}>: {ok}", i + 1, d[i], d[j], d[l]), ok)
        })
        .collect();
    let halves: Vec<(String, bool)> = (0..3)
        .map(|i| {
            let ok = half(&d[i]).is_none();
            (format!("deg f{} / 2 not integral: {ok}", i + 1), ok)
        })
        .collect();
    // l·d3 < d_i for every l ≥ 1 iff d_i leads at a strictly earlier
    // coordinate than d3 (lexicographic order, positive leading entries).
    let order: Vec<(String, bool)> = [0, 1]
        .iter()
        .map(|&i| {
            let ok = match (d[i].leading_index(), d[2].leading_index()) {
                (Some(a), Some(b)) => a < b && d[i].comps()[a] > 0 && d[2].comps()[b] > 0,
                _ => false,
            };
            (format!("every multiple of deg f3 = {} is below deg f{} = {}: {ok}", d[2], i + 1, d[i]), ok)
        })
        .collect();
    let check = |v: Vec<(String, bool)>| Check { holds: v.iter().all(|x| x.1), detail: v.into_iter().map(|x| x.0).collect() };
    let above = total > floor;
    let checks = CertificateChecks {
        above_floor: Check { holds: above, detail: vec![format!("deg F = {total} > |w| = {floor}: {above}")] },
        pairwise_independent: check(indep),
        semigroup_obstruction: check(semigroup),
        half_obstruction: check(halves),
        order_obstruction: check(order),
    };
    let inverse_verified = verify_automorphism(&f, &nagata_inverse());
    let mut cert = NagataCertificate { degrees: d, total, floor, checks, inverse_verified, verdict: String::new() };
    cert.verdict = if cert.all_pass() {
        "not tame (conditional on the reduction theorem)".into()
    } else {
        "inconclusive".into()
    };
    cert
}

/// Bounds for [`random_tame`].
#[derive(Clone, Copy, Debug)]
pub struct CorpusBounds {
    pub factor_count: usize,
    pub coefficient_bound: i64,
    pub degree_bound: u32,
}

impl Default for CorpusBounds {
    fn default() -> Self {
        CorpusBounds { factor_count: 5, coefficient_bound: 3, degree_bound: 3 }
    }
}

/// A generated tame automorphism with its factors and verified inverse.
#[derive(Clone, Debug)]
pub struct TameSample {
    pub f: Endo3,
    pub factors: Vec<TameFactor>,
    pub inverse: Endo3,
}

fn nonzero(rng: &mut ChaCha8Rng, bound: i64) -> Coeff {
    let mut v = 0;
    while v == 0 {
        v = rng.gen_range(-bound..=bound);
    }
    Coeff::from_integer(v.into())
}

fn random_factor(rng: &mut ChaCha8Rng, b: &CorpusBounds) -> TameFactor {
    let bound = b.coefficient_bound.max(1);
    if rng.gen_bool(0.5) {
        // A signed permutation with nonzero scalings, one shear and a translation.
        let mut perm = [0usize, 1, 2];
        perm.shuffle(rng);
        let mut matrix: [[Coeff; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| Coeff::zero()));
        for i in 0..3 {
            matrix[i][perm[i]] = nonzero(rng, bound);
        }
        let i = rng.gen_range(0..3);
        let j = (i + rng.gen_range(1..3)) % 3;
        matrix[i][perm[j]] = Coeff::from_integer(rng.gen_range(-bound..=bound).into());
        let translation = std::array::from_fn(|_| Coeff::from_integer(rng.gen_range(-bound..=bound).into()));
        TameFactor::affine(matrix, translation).expect("shear of a monomial matrix is invertible")
    } else {
        let index = rng.gen_range(0..3);
        let (j, l) = crate::search::others(index);
        let terms = rng.gen_range(1..=2);
        let mut phi = Polynomial::zero(3);
        for _ in 0..terms {
            let deg = rng.gen_range(1..=b.degree_bound.max(1));
            let a = rng.gen_range(0..=deg);
            let mut e = [0u16; 3];
            e[j] = a as u16;
            e[l] = (deg - a) as u16;
            phi.add_term(Monomial::new(&e), nonzero(rng, bound));
        }
        TameFactor::Elementary { index, phi }
    }
}

/// A deterministic tame automorphism from `seed`.
pub fn random_tame(seed: u64, bounds: &CorpusBounds) -> TameSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let factors: Vec<TameFactor> = (0..bounds.factor_count).map(|_| random_factor(&mut rng, bounds)).collect();
    let f = recompose(&factors);
    // Verified factor by factor: composing F with its inverse directly can
    // expand to millions of intermediate terms.
    debug_assert!(factors.iter().all(|l| verify_automorphism(&l.to_endo(), &l.inverse().to_endo())));
    let inverse = recompose(&inverse_factors(&factors));
    TameSample { f, factors, inverse }
}

/// `count` samples with seeds `seed, seed + 1, …`.
pub fn tame_corpus(seed: u64, count: usize, bounds: &CorpusBounds) -> Vec<TameSample> {
    (0..count as u64).map(|k| random_tame(seed.wrapping_add(k), bounds)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, 3).unwrap()
    }

    #[test]
    fn factor_inverses() {
        let f = TameFactor::affine(
            [[Coeff::from_integer(2.into()), Coeff::one(), Coeff::zero()], [Coeff::zero(), Coeff::one(), Coeff::zero()], [Coeff::zero(), Coeff::zero(), Coeff::one()]],
            [Coeff::one(), Coeff::zero(), -Coeff::one()],
        )
        .unwrap();
        assert!(verify_automorphism(&f.to_endo(), &f.inverse().to_endo()));
        let e = TameFactor::elementary(1, p("x1^2 - x3")).unwrap();
        assert!(verify_automorphism(&e.to_endo(), &e.inverse().to_endo()));
        assert!(TameFactor::elementary(1, p("x2")).is_err());
    }

    #[test]
    fn nagata_inverse_is_verified() {
        assert!(verify_automorphism(&nagata(), &nagata_inverse()));
    }

    #[test]
    fn triangular_example() {
        let ws = WeightSystem::total_degree(3);
        let f = Endo3::new(p("x1"), p("x2 + x1^2"), p("x3 + x1*x2"));
        let fs = triangularize_at_floor(&ws, &f).unwrap();
        assert_eq!(fs.len(), 3);
        assert_eq!(fs[0], TameFactor::Elementary { index: 1, phi: p("x1^2") });
        assert_eq!(fs[1], TameFactor::Elementary { index: 2, phi: p("x1*x2") });
        assert!(fs[2].is_identity());
    }

    #[test]
    fn reduce_small_examples() {
        let ws = WeightSystem::total_degree(3);
        let opts = ReduceOptions::default();
        let f = Endo3::new(p("x1 + x2^2"), p("x2"), p("x3"));
        match reduce_step(&ws, &f, &opts).unwrap() {
            StepResult::Elementary(e) => assert_eq!(e.index, 0),
            other => panic!("{other:?}"),
        }
        let t = reduce_to_floor(&ws, &Endo3::identity(), &opts).unwrap();
        assert!(t.steps.is_empty() && t.outcome == Outcome::Floor);
        let t = factor_tame(&WeightSystem::lex_unit(3), &nagata(), &opts).unwrap();
        match &t.outcome {
            Outcome::Stuck(r) => assert!(r.iter().all(Absence::is_rigorous)),
            other => panic!("{other:?}"),
        }
        assert!(t.steps.is_empty());
    }

    #[test]
    fn su_step_factors_recompose() {
        let ws = WeightSystem::total_degree(3);
        // The planted pair is not an automorphism, so only one step is checked.
        let (f, _) = crate::su::planted_su_pair(&Coeff::from_integer(2.into()), &-Coeff::one());
        for sigma in PERMUTATIONS {
            let fp = f.unpermute(sigma);
            let opts = ReduceOptions { su_first: true, ..ReduceOptions::default() };
            let StepResult::Su(s) = reduce_step(&ws, &fp, &opts).unwrap() else { panic!("no SU step") };
            let step = TraceStep::Su(s.clone());
            assert_eq!(fp.then(&recompose(&step.forward_factors())), s.g);
            assert_eq!(s.g.then(&recompose(&step.inverse_factors())), fp);
        }
    }

    #[test]
    fn corpus_is_deterministic_and_invertible() {
        let b = CorpusBounds::default();
        let a = random_tame(7, &b);
        assert_eq!(a.f, random_tame(7, &b).f);
        assert!(verify_automorphism(&a.f, &a.inverse));
        assert!(random_tame(1, &CorpusBounds { factor_count: 0, ..b }).f.is_identity());
    }
}
