//! Graded Newton iteration for ansätze of the form
//! `D = P(g1(θ), g2(θ)) + ν·e`, where `P = y1^a y2^b + Σ c_ij y1^i y2^j` has a
//! fixed monic term and `g_k(θ) = g_k + Σ θ_u B_ku` depend linearly on `θ`.
//!
//! Each round linearizes `D` in all unknowns and cancels every monomial of
//! degree at least `deg D`. The iteration stops as soon as the caller's
//! acceptance predicate holds, so convergence is never assumed.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::degree::WeightSystem;
use crate::linalg::Eliminator;
use crate::poly::{Coeff, Monomial, Polynomial};

/// Unknowns and fixed data of one ansatz.
#[derive(Clone, Debug)]
pub struct Ansatz {
    pub g1: Polynomial,
    pub g2: Polynomial,
    /// Directions `(B1u, B2u)` along which `θ_u` moves `(g1, g2)`.
    pub dirs: Vec<(Polynomial, Polynomial)>,
    pub theta: Vec<Coeff>,
    /// Exponent of the fixed monic term of `P`.
    pub lead: (u32, u32),
    /// Exponents of the free coefficients of `P`.
    pub monos: Vec<(u32, u32)>,
    pub c: Vec<Coeff>,
    /// The polynomial multiplied by `ν`.
    pub extra: Polynomial,
    pub nu: Coeff,
}

/// A snapshot after a round; `d = P(g1, g2) + ν·extra`.
#[derive(Clone, Debug)]
pub struct NewtonState {
    pub g1: Polynomial,
    pub g2: Polynomial,
    /// `P` as a polynomial in two variables.
    pub p: Polynomial,
    pub d: Polynomial,
    pub nu: Coeff,
    pub theta: Vec<Coeff>,
    pub round: usize,
}

impl Ansatz {
    fn current(&self) -> (Polynomial, Polynomial) {
        let mut g1 = self.g1.clone();
        let mut g2 = self.g2.clone();
        for ((b1, b2), t) in self.dirs.iter().zip(&self.theta) {
            if !t.is_zero() {
                g1.add_scaled(b1, t);
                g2.add_scaled(b2, t);
            }
        }
        (g1, g2)
    }

    fn p(&self) -> Polynomial {
        let mono = |(i, j): (u32, u32)| Monomial::new(&[i as u16, j as u16]);
        let mut p = Polynomial::term(mono(self.lead), Coeff::from_integer(1.into()));
        for (m, c) in self.monos.iter().zip(&self.c) {
            p.add_term(mono(*m), c.clone());
        }
        p
    }

    fn state(&self, round: usize) -> NewtonState {
        let (g1, g2) = self.current();
        let p = self.p();
        let mut d = p.compose(&[g1.clone(), g2.clone()]).expect("two generators");
        d.add_scaled(&self.extra, &self.nu);
        NewtonState { g1, g2, p, d, nu: self.nu.clone(), theta: self.theta.clone(), round }
    }
}

/// Run at most `max_rounds` rounds; `accept` sees every iterate, including
/// the starting point.
pub fn solve(ws: &WeightSystem, mut ansatz: Ansatz, max_rounds: usize, mut accept: impl FnMut(&NewtonState) -> bool) -> Option<NewtonState> {
    for round in 0..=max_rounds {
        let st = ansatz.state(round);
        if accept(&st) {
            return Some(st);
        }
        if round == max_rounds || st.d.is_zero() {
            return None;
        }
        let e = st.d.degw(ws);
        let subs = [st.g1.clone(), st.g2.clone()];
        let mut cols: Vec<Polynomial> = Vec::new();
        for &(i, j) in &ansatz.monos {
            cols.push((&st.g1.pow(i) * &st.g2.pow(j)).truncate_ge(ws, &e));
        }
        cols.push(ansatz.extra.truncate_ge(ws, &e));
        if !ansatz.dirs.is_empty() {
            let p1 = st.p.derivative(0).compose(&subs).expect("two generators");
            let p2 = st.p.derivative(1).compose(&subs).expect("two generators");
            for (b1, b2) in &ansatz.dirs {
                cols.push((&(&p1 * b1) + &(&p2 * b2)).truncate_ge(ws, &e));
            }
        }
        let rhs = st.d.truncate_ge(ws, &e);
        let mut rows: BTreeSet<Monomial> = rhs.terms().map(|(m, _)| *m).collect();
        for c in &cols {
            rows.extend(c.terms().map(|(m, _)| *m));
        }
        let mut el = Eliminator::new(cols.len());
        for m in rows.iter().rev() {
            let row: Vec<Coeff> = cols.iter().map(|c| c.coeff(m)).collect();
            el.push(&row, &-rhs.coeff(m));
        }
        let delta = el.solution()?;
        if delta.iter().all(Zero::is_zero) {
            return None;
        }
        let k = ansatz.monos.len();
        for (c, x) in ansatz.c.iter_mut().zip(&delta[..k]) {
            *c += x;
        }
        ansatz.nu += &delta[k];
        for (t, x) in ansatz.theta.iter_mut().zip(&delta[k + 1..]) {
            *t += x;
        }
    }
    None
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
    fn recovers_planted_relation() {
        let ws = WeightSystem::total_degree(3);
        let g1 = p("x1^6 + 3/2*x1^2*x2");
        let g2 = p("x1^4 + x2");
        let theta = &g1.pow(2) - &g2.pow(3);
        let f3 = &p("x3") - &theta.scale(&q(2));
        let ansatz = Ansatz {
            g1: g1.clone(),
            g2: g2.clone(),
            dirs: vec![],
            theta: vec![],
            lead: (2, 0),
            monos: vec![(0, 3), (0, 1), (0, 2), (1, 0), (1, 1)],
            c: vec![q(-1), q(0), q(0), q(0), q(0)],
            extra: f3,
            nu: q(0),
        };
        let st = solve(&ws, ansatz, 8, |s| !s.nu.is_zero() && s.d.degw(&ws) <= p("x3").degw(&ws)).unwrap();
        assert_eq!(st.d, p("x3").scale(&st.nu));
    }
}
