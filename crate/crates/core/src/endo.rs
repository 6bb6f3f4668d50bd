//! Triples of polynomials viewed as ring endomorphisms of `Q[x1,x2,x3]`.
//!
//! `F = (f1, f2, f3)` sends `x_i` to `f_i`. Ring composition `F∘G` sends
//! `x_i` to `g_i(f1, f2, f3)`.

use std::fmt;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::degree::{DegreeValue, WeightSystem};
use crate::error::{Error, Result};
use crate::forms::algebraically_independent;
use crate::poly::{Coeff, Polynomial};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Endo3 {
    pub f: [Polynomial; 3],
}

impl Endo3 {
    pub fn new(f1: Polynomial, f2: Polynomial, f3: Polynomial) -> Self {
        Endo3 { f: [f1.with_arity(3), f2.with_arity(3), f3.with_arity(3)] }
    }

    pub fn from_vec(v: Vec<Polynomial>) -> Result<Self> {
        let found = v.len();
        let [a, b, c]: [Polynomial; 3] = v.try_into().map_err(|_| Error::Arity { expected: 3, found })?;
        for p in [&a, &b, &c] {
            if p.n() > 3 {
                return Err(Error::Arity { expected: 3, found: p.n() });
            }
        }
        Ok(Endo3::new(a, b, c))
    }

    pub fn identity() -> Self {
        Endo3::new(Polynomial::var(3, 0), Polynomial::var(3, 1), Polynomial::var(3, 2))
    }

    pub fn is_identity(&self) -> bool {
        *self == Endo3::identity()
    }

    pub fn get(&self, i: usize) -> &Polynomial {
        &self.f[i]
    }

    /// Ring composition `self∘g`: component `i` is `g_i(self)`.
    pub fn then(&self, g: &Endo3) -> Endo3 {
        let subs = self.f.to_vec();
        let c = |p: &Polynomial| p.with_arity(3).compose(&subs).expect("three components");
        Endo3::new(c(&g.f[0]), c(&g.f[1]), c(&g.f[2]))
    }

    /// `F_σ = (f_{σ(1)}, f_{σ(2)}, f_{σ(3)})` with a 0-based `σ`.
    pub fn permute(&self, sigma: [usize; 3]) -> Endo3 {
        Endo3::new(self.f[sigma[0]].clone(), self.f[sigma[1]].clone(), self.f[sigma[2]].clone())
    }

    /// Inverse of [`Endo3::permute`]: the triple `G` with `G_σ = self`.
    pub fn unpermute(&self, sigma: [usize; 3]) -> Endo3 {
        let mut out = self.f.clone();
        for k in 0..3 {
            out[sigma[k]] = self.f[k].clone();
        }
        Endo3 { f: out }
    }

    pub fn scale(&self, c: [&Coeff; 3]) -> Result<Endo3> {
        if c.iter().any(|x| x.is_zero()) {
            return Err(Error::Precondition("scaling factors must be nonzero".into()));
        }
        Ok(Endo3::new(self.f[0].scale(c[0]), self.f[1].scale(c[1]), self.f[2].scale(c[2])))
    }

    pub fn degrees(&self, ws: &WeightSystem) -> [DegreeValue; 3] {
        [self.f[0].degw(ws), self.f[1].degw(ws), self.f[2].degw(ws)]
    }

    /// `deg_w F = Σ deg_w f_i`.
    pub fn degree(&self, ws: &WeightSystem) -> DegreeValue {
        let d = self.degrees(ws);
        d[0].add(&d[1]).add(&d[2])
    }

    pub fn is_independent(&self) -> bool {
        algebraically_independent(&self.f)
    }

    /// Strings in the canonical text grammar.
    pub fn to_strings(&self) -> [String; 3] {
        [self.f[0].to_string(), self.f[1].to_string(), self.f[2].to_string()]
    }
}

/// `compose_endo(F, G) = F∘G`.
pub fn compose_endo(f: &Endo3, g: &Endo3) -> Endo3 {
    f.then(g)
}

/// True iff `F∘G` and `G∘F` are both the identity.
pub fn verify_automorphism(f: &Endo3, g: &Endo3) -> bool {
    f.then(g).is_identity() && g.then(f).is_identity()
}

/// The permutation map `P` with `P(x_i) = x_{σ(i)}`, so `F∘P = F_σ`.
pub fn permutation_map(sigma: [usize; 3]) -> Endo3 {
    Endo3::identity().permute(sigma)
}

pub fn inverse_permutation(sigma: [usize; 3]) -> [usize; 3] {
    let mut inv = [0; 3];
    for (k, &s) in sigma.iter().enumerate() {
        inv[s] = k;
    }
    inv
}

/// All of `S_3` in lexicographic order, identity first.
pub const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

impl Serialize for Endo3 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl fmt::Display for Endo3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.f[0], self.f[1], self.f[2])
    }
}

impl fmt::Debug for Endo3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_polynomial;

    fn e(a: &str, b: &str, c: &str) -> Endo3 {
        let p = |s| parse_polynomial(s, 3).unwrap();
        Endo3::new(p(a), p(b), p(c))
    }

    #[test]
    fn composition_order() {
        let e2 = e("x1", "x2 + x1^2", "x3");
        let e3 = e("x1", "x2", "x3 + x1*x2");
        assert_eq!(e3.then(&e2), e("x1", "x2 + x1^2", "x3 + x1*x2"));
        let inv = e("x1", "x2 - x1^2", "x3");
        assert!(verify_automorphism(&e2, &inv));
        assert!(!verify_automorphism(&e2, &Endo3::identity()));
    }

    #[test]
    fn permutations() {
        let f = e("x1 + x2^2", "x2", "x3 - 1");
        for s in PERMUTATIONS {
            assert_eq!(f.permute(s).unpermute(s), f);
            assert_eq!(f.then(&permutation_map(s)), f.permute(s));
            let back = permutation_map(s).then(&permutation_map(inverse_permutation(s)));
            assert!(back.is_identity());
        }
    }
}
