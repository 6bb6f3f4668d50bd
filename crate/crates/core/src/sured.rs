//! Search for SU reductions in normal form.
//!
//! For each `σ`, the degrees of `F_σ` fix which of `a, b, c` can reach the
//! leading forms; those scalars are solved exactly from the leading-form
//! relation `(g1^w)² ≈ (g2^w)^s`, and a failure there is rigorous. The
//! remaining scalars and `φ3` are found by graded Newton iteration on
//! `D = P(g1, g2) + ν f3` with `P = y1² − λ y2^s + Σ c_ij y1^i y2^j`, whose
//! failure is inconclusive. Every hit is re-validated by the SU checker.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::degree::{half, DegreeValue, WeightSystem};
use crate::endo::{Endo3, PERMUTATIONS};
use crate::error::{Error, Result};
use crate::newton::{solve, Ansatz, NewtonState};
use crate::poly::{Coeff, Polynomial};
use crate::search::{root_up_to_scalar, Absence, Found, Reason, SearchLimits};
use crate::su::{check_su_conditions_with, decompose, deg_wedge, PairHints};
use crate::univariate::BiPoly;

/// Scalars and `φ3` of an SU reduction `G = F∘P∘E1∘E2∘E3∘P⁻¹` with
/// `E1: x1 ↦ x1 + a x3² + c x3`, `E2: x2 ↦ x2 + b x3`, `E3: x3 ↦ x3 + φ3(x1, x2)`.
#[derive(Clone, Debug)]
pub struct SuWitness {
    /// 0-based; `F_σ = (f_σ(1), f_σ(2), f_σ(3))`.
    pub sigma: [usize; 3],
    pub a: Coeff,
    pub b: Coeff,
    pub c: Coeff,
    /// `φ3` over `(g1, g2)` of `G_σ`.
    pub phi3: BiPoly,
    pub s: i64,
    pub delta: DegreeValue,
}

impl SuWitness {
    /// `φ3` in the variables `x1, x2`.
    pub fn phi3_in_variables(&self) -> Polynomial {
        self.phi3.with_gens(Polynomial::var(3, 0), Polynomial::var(3, 1)).value()
    }

    /// Rebuild `G_σ` from `F_σ`.
    pub fn apply_sigma(&self, f_sigma: &Endo3) -> Endo3 {
        let [f1, f2, f3] = &f_sigma.f;
        let g1 = &(f1 + &f3.pow(2).scale(&self.a)) + &f3.scale(&self.c);
        let g2 = f2 + &f3.scale(&self.b);
        let g3 = f3 + &self.phi3.with_gens(g1.clone(), g2.clone()).value();
        Endo3::new(g1, g2, g3)
    }

    /// `G` from `F`.
    pub fn apply(&self, f: &Endo3) -> Endo3 {
        self.apply_sigma(&f.permute(self.sigma)).unpermute(self.sigma)
    }
}

#[derive(Serialize)]
struct WitnessJson {
    sigma: [usize; 3],
    a: String,
    b: String,
    c: String,
    d: String,
    psi: String,
    phi3: String,
    s: i64,
    delta: DegreeValue,
}

impl Serialize for SuWitness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WitnessJson {
            sigma: self.sigma.map(|i| i + 1),
            a: self.a.to_string(),
            b: self.b.to_string(),
            c: self.c.to_string(),
            d: "0".into(),
            psi: "0".into(),
            phi3: self.phi3.to_poly2().to_string(),
            s: self.s,
            delta: self.delta.clone(),
        }
        .serialize(s)
    }
}

#[derive(Clone, Debug)]
pub struct SuStep {
    pub witness: SuWitness,
    pub g: Endo3,
    /// `deg_w F` and `deg_w G`.
    pub degree_before: DegreeValue,
    pub degree_after: DegreeValue,
}

/// Which scalar a Newton direction moves.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Dir {
    A,
    B,
    C,
    /// `t = 1/a` in the rescaled shape where `g1 = f3² + t f1 + c' f3`.
    T,
}

struct Plan {
    s: i64,
    delta: DegreeValue,
    g1: Polynomial,
    g2: Polynomial,
    dirs: Vec<(Dir, Polynomial, Polynomial)>,
    init: Vec<Coeff>,
    rescaled: bool,
}

fn zero3() -> Polynomial {
    Polynomial::zero(3)
}

/// The leading-form stage for one ordering; `Err` carries a rigorous reason.
fn plan(ws: &WeightSystem, f: &Endo3) -> std::result::Result<Plan, String> {
    let [f1, f2, f3] = &f.f;
    let [d1, d2, d3] = f.degrees(ws);
    if !(d2 < d1 && d3 <= d1) {
        return Err(format!("degree order ({d1}, {d2}, {d3}) incompatible"));
    }
    let delta = half(&d2).ok_or_else(|| format!("deg f2 = {d2} is not even"))?;
    if d3 <= delta {
        return Err(format!("deg f3 = {d3} not above delta = {delta}"));
    }
    let (w1, w2, w3) = (f1.lf(ws), f2.lf(ws), f3.lf(ws));
    let a_free = d3 <= d2;
    let s_a = d1.multiple_of(&delta).filter(|s| *s >= 3 && s % 2 == 1);
    if let Some(s) = s_a {
        if d3 > delta.scale(s) {
            return Err(format!("deg f3 = {d3} above s delta"));
        }
        let mut init_a = Coeff::zero();
        let mut init_b = Coeff::zero();
        let mut init_c = Coeff::zero();
        if d3 == d2 {
            let (_, h) = root_up_to_scalar(&w1, s as u32).ok_or("f1^w is not an s-th power up to scalar")?;
            let x = decompose(&-&w2, &[w3.clone(), h.pow(2)]).ok_or("g2^w cannot be made a square multiple")?;
            if x[1].is_zero() {
                return Err("cancellation kills g2^w".into());
            }
            init_b = x[0].clone();
        } else {
            let (_, h) = root_up_to_scalar(&w2, 2).ok_or("f2^w is not a square up to scalar")?;
            let mut basis = vec![h.pow(s as u32)];
            let use_a = a_free && d3.scale(2) == d1;
            let use_c = d3 == d1;
            if use_a {
                basis.push(-&w3.pow(2));
            }
            if use_c {
                basis.push(-&w3);
            }
            let x = decompose(&w1, &basis).ok_or("g1^w cannot be made an s-th power")?;
            if x[0].is_zero() {
                return Err("cancellation kills g1^w".into());
            }
            let mut k = 1;
            if use_a {
                init_a = x[k].clone();
                k += 1;
            }
            if use_c {
                init_c = x[k].clone();
            }
        }
        let mut dirs = vec![(Dir::C, f3.clone(), zero3())];
        let mut init = vec![init_c];
        if a_free {
            dirs.push((Dir::A, f3.pow(2), zero3()));
            init.push(init_a);
            dirs.push((Dir::B, zero3(), f3.clone()));
            init.push(init_b);
        }
        return Ok(Plan { s, delta, g1: f1.clone(), g2: f2.clone(), dirs, init, rescaled: false });
    }
    // deg f1 < deg g1: s = 3, g1^w ≈ (f3^w)², deg f3 = (3/2)δ.
    if d1 < delta.scale(3) && d3.scale(2) == delta.scale(3) {
        let (_, h) = root_up_to_scalar(&w2, 2).ok_or("f2^w is not a square up to scalar")?;
        if w3.pow(2).proportional_to(&h.pow(3)).is_none() {
            return Err("(f3^w)^2 is not a cube of sqrt(f2^w)".into());
        }
        let dirs = vec![(Dir::T, f1.clone(), zero3()), (Dir::C, f3.clone(), zero3()), (Dir::B, zero3(), f3.clone())];
        let init = vec![Coeff::zero(); 3];
        return Ok(Plan { s: 3, delta, g1: f3.pow(2), g2: f2.clone(), dirs, init, rescaled: true });
    }
    Err(format!("deg f1 = {d1} is neither an odd multiple of delta = {delta} nor below 3 delta with deg f3 = 3/2 delta"))
}

/// `P`'s free monomials: `y2^s` first, then `y1^i y2^j` with `i ≤ 1` below
/// the S-degree of `y1²`.
pub(crate) fn monomials(s: i64) -> Vec<(u32, u32)> {
    let s = s as u32;
    let mut out = vec![(0, s)];
    for j in 1..s {
        out.push((0, j));
    }
    for j in 0..s.div_ceil(2) {
        if 2 * j < s {
            out.push((1, j));
        }
    }
    out
}

/// Search every `σ` for an SU reduction of `F`.
pub fn find_su_reduction(ws: &WeightSystem, f: &Endo3, limits: &SearchLimits) -> Result<Found<SuStep>> {
    if !f.is_independent() {
        return Err(Error::Dependent);
    }
    let before = f.degree(ws);
    let mut rigorous = true;
    let mut notes = Vec::new();
    for sigma in PERMUTATIONS {
        let fs = f.permute(sigma);
        let p = match plan(ws, &fs) {
            Ok(p) => p,
            Err(why) => {
                notes.push(format!("sigma {:?}: {why}", sigma.map(|i| i + 1)));
                continue;
            }
        };
        match newton_for(ws, &fs, &p, limits) {
            Some(w) => {
                let witness = SuWitness { sigma, ..w };
                let g_sigma = witness.apply_sigma(&fs);
                let hints = PairHints { phi3: Some(witness.phi3.clone()), phi1: None };
                let report = check_su_conditions_with(ws, &fs, &g_sigma, &hints, limits)?;
                if report.overall() {
                    let g = g_sigma.unpermute(sigma);
                    let after = g.degree(ws);
                    return Ok(Ok(SuStep { witness, g, degree_before: before, degree_after: after }));
                }
                rigorous = false;
                notes.push(format!("sigma {:?}: candidate fails {:?}", sigma.map(|i| i + 1), report.failures()));
            }
            None => {
                rigorous = false;
                notes.push(format!("sigma {:?}: no phi3 within limits", sigma.map(|i| i + 1)));
            }
        }
    }
    let reason = if rigorous { Reason::DegreeShape } else { Reason::LimitsExhausted };
    Ok(Err(Absence::new(reason, notes.join("; "))))
}

fn newton_for(ws: &WeightSystem, f: &Endo3, p: &Plan, limits: &SearchLimits) -> Option<SuWitness> {
    let d3 = f.f[2].degw(ws);
    let monos = monomials(p.s);
    // Leading forms are fixed by the plan, so λ is too.
    let init_g1 = p.dirs.iter().zip(&p.init).fold(p.g1.clone(), |mut acc, ((_, b1, _), t)| {
        acc.add_scaled(b1, t);
        acc
    });
    let init_g2 = p.dirs.iter().zip(&p.init).fold(p.g2.clone(), |mut acc, ((_, _, b2), t)| {
        acc.add_scaled(b2, t);
        acc
    });
    let lambda = init_g1.lf(ws).pow(2).proportional_to(&init_g2.lf(ws).pow(p.s as u32))?;
    let mut c = vec![Coeff::zero(); monos.len()];
    c[0] = -lambda;
    let ansatz = Ansatz {
        g1: p.g1.clone(),
        g2: p.g2.clone(),
        dirs: p.dirs.iter().map(|(_, a, b)| (a.clone(), b.clone())).collect(),
        theta: p.init.clone(),
        lead: (2, 0),
        monos,
        c,
        extra: f.f[2].clone(),
        nu: Coeff::zero(),
    };
    let t_index = p.dirs.iter().position(|(d, _, _)| *d == Dir::T);
    let accept = |st: &NewtonState| {
        if st.nu.is_zero() || t_index.is_some_and(|k| st.theta[k].is_zero()) {
            return false;
        }
        let dd = st.d.degw(ws);
        if dd >= d3 {
            return false;
        }
        let w = deg_wedge(ws, &[st.g1.clone(), st.g2.clone()]);
        dd < st.g1.degw(ws).sub(&st.g2.degw(ws)).add(&w)
    };
    let st = solve(ws, ansatz, limits.newton_rounds(), accept)?;
    let get = |d: Dir| p.dirs.iter().position(|(x, _, _)| *x == d).map(|k| st.theta[k].clone()).unwrap_or_else(Coeff::zero);
    let inv_nu = Coeff::one() / &st.nu;
    let (a, c, scale) = if p.rescaled {
        let t = get(Dir::T);
        let a = Coeff::one() / &t;
        (a.clone(), get(Dir::C) * &a, t)
    } else {
        (get(Dir::A), get(Dir::C), Coeff::one())
    };
    // P(g1', g2) with g1' = g1 / a reads P(t y1, y2) in terms of g1.
    let mut phi3 = BiPoly::new(zero3(), zero3());
    for (m, coef) in st.p.terms() {
        let i = m.exp(0) as u32;
        let j = m.exp(1) as u32;
        let mut k = coef * &inv_nu;
        for _ in 0..i {
            k *= &scale;
        }
        phi3.add((i, j), k);
    }
    let g1 = if p.rescaled { st.g1.scale(&a) } else { st.g1.clone() };
    let phi3 = phi3.with_gens(g1, st.g2.clone());
    Some(SuWitness { sigma: [0, 1, 2], a, b: get(Dir::B), c, phi3, s: p.s, delta: p.delta.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{q, qr};
    use crate::su::{check_quasi_su, planted_su_pair};
    use crate::text::parse_polynomial;

    #[test]
    fn nagata_admits_no_su_reduction_under_lex() {
        let p = |s| parse_polynomial(s, 3).unwrap();
        let f = Endo3::new(
            p("x1 - 2*x1*x2*x3 - 2*x2^3 - x1^2*x3^3 - 2*x1*x2^2*x3^2 - x2^4*x3"),
            p("x2 + x1*x3^2 + x2^2*x3"),
            p("x3"),
        );
        let r = find_su_reduction(&WeightSystem::lex_unit(3), &f, &SearchLimits::default()).unwrap();
        let a = r.unwrap_err();
        assert_eq!(a.reason, Reason::DegreeShape);
    }

    #[test]
    fn planted_pairs_are_found() {
        let ws = WeightSystem::total_degree(3);
        for (c, mu) in [(q(0), q(1)), (q(2), q(-1)), (qr(1, 3), q(5))] {
            let (f, _) = planted_su_pair(&c, &mu);
            for sigma in PERMUTATIONS {
                let fp = f.unpermute(sigma);
                let step = find_su_reduction(&ws, &fp, &SearchLimits::default()).unwrap().unwrap();
                assert!(step.degree_after < step.degree_before);
                let fs = fp.permute(step.witness.sigma);
                let gs = step.g.permute(step.witness.sigma);
                assert!(check_quasi_su(&ws, &fs, &gs).unwrap().overall());
                assert_eq!(step.witness.apply(&fp), step.g);
            }
        }
    }
}
