//! Shared proptest strategies: small polynomials in three variables and a
//! fixed menu of weight systems.

#![allow(dead_code)]

use proptest::prelude::*;
use tame3_core::{q, Monomial, Polynomial, WeightSystem};

/// Total degree, `nagata-lex`, a rank-one weighting and a rank-two system
/// with a negative coordinate.
pub fn weight(k: usize) -> WeightSystem {
    match k % 4 {
        0 => WeightSystem::total_degree(3),
        1 => WeightSystem::lex_unit(3),
        2 => WeightSystem::new(vec![vec![2], vec![3], vec![1]]).expect("positive"),
        _ => WeightSystem::new(vec![vec![1, 0], vec![2, -1], vec![0, 1]]).expect("positive"),
    }
}

pub fn weight_index() -> impl Strategy<Value = usize> {
    0usize..4
}

pub type Terms = Vec<([u16; 3], i64)>;

pub fn build(terms: &Terms) -> Polynomial {
    Polynomial::from_terms(3, terms.iter().map(|(e, c)| (Monomial::new(e), q(*c))))
}

/// Up to `len` terms with exponents at most `max_exp`; may cancel to zero.
pub fn terms(max_exp: u16, len: usize) -> impl Strategy<Value = Terms> {
    prop::collection::vec(([0..=max_exp, 0..=max_exp, 0..=max_exp], -3i64..=3), 1..=len)
}

pub fn nonzero_terms(max_exp: u16, len: usize) -> impl Strategy<Value = Terms> {
    terms(max_exp, len).prop_filter("nonzero", |t| !build(t).is_zero())
}

/// Terms in the variables listed in `vars` only.
pub fn terms_in(vars: &'static [usize], max_exp: u16, len: usize) -> impl Strategy<Value = Terms> {
    terms(max_exp, len).prop_map(move |t| {
        t.into_iter()
            .map(|(e, c)| {
                let mut out = [0u16; 3];
                for &v in vars {
                    out[v] = e[v];
                }
                (out, c)
            })
            .collect()
    })
}
