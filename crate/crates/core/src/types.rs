//! Detectors for reductions of types I–IV under `w = (1,1,1)`.
//!
//! `F_σ = (f1, f2, f3)` must have `deg f1 = 2l`. The scalars reaching leading
//! forms are solved exactly; the element of `k[g1, g2]` is found by graded
//! Newton iteration on `D = P(g2, g1) + ν f3` with `P = y1² − λ y2^s + …`,
//! whose failure is inconclusive.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::degree::{DegreeValue, WeightSystem};
use crate::endo::{Endo3, PERMUTATIONS};
use crate::error::{Error, Result};
use crate::newton::{solve, Ansatz, NewtonState};
use crate::poly::{Coeff, Polynomial};
use crate::search::{homogeneous_membership, root_up_to_scalar, Absence, Found, Reason, SearchLimits};
use crate::su::{decompose, deg_wedge};
use crate::sured::monomials;
use crate::univariate::BiPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeKind {
    I,
    II,
    III,
    IV,
}

impl TypeKind {
    pub const ALL: [TypeKind; 4] = [TypeKind::I, TypeKind::II, TypeKind::III, TypeKind::IV];

    pub fn label(self) -> &'static str {
        match self {
            TypeKind::I => "typeI",
            TypeKind::II => "typeII",
            TypeKind::III => "typeIII",
            TypeKind::IV => "typeIV",
        }
    }
}

impl fmt::Display for TypeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label()[4..])
    }
}

impl FromStr for TypeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" => Ok(TypeKind::I),
            "II" => Ok(TypeKind::II),
            "III" => Ok(TypeKind::III),
            "IV" => Ok(TypeKind::IV),
            other => Err(Error::Precondition(format!("unknown reduction type '{other}'"))),
        }
    }
}

impl Serialize for TypeKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

/// Scalars follow each type's definition: type I has `g2 = f2 − α f3`;
/// type II has `g1 = f1 − α f3`, `g2 = f2 − β f3`; types III and IV have
/// `g1 = f1 − β f3`, `g2 = f2 − γ f3 − α f3²`. Always `g3 = σ f3 + g` with
/// `g ∈ k[g1, g2]`, and unused scalars are zero.
#[derive(Clone, Debug)]
pub struct TypeWitness {
    pub kind: TypeKind,
    pub perm: [usize; 3],
    pub l: i64,
    pub s: i64,
    pub alpha: Coeff,
    pub beta: Coeff,
    pub gamma: Coeff,
    pub mu: Option<Coeff>,
    pub sigma_scalar: Coeff,
    pub g: BiPoly,
    pub g_triple: Endo3,
}

impl Serialize for TypeWitness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct J<'a> {
            r#type: TypeKind,
            sigma: [usize; 3],
            l: i64,
            s: i64,
            alpha: String,
            beta: String,
            gamma: String,
            mu: Option<String>,
            sigma_scalar: String,
            g: String,
            g_triple: &'a Endo3,
        }
        J {
            r#type: self.kind,
            sigma: self.perm.map(|i| i + 1),
            l: self.l,
            s: self.s,
            alpha: self.alpha.to_string(),
            beta: self.beta.to_string(),
            gamma: self.gamma.to_string(),
            mu: self.mu.as_ref().map(|m| m.to_string()),
            sigma_scalar: self.sigma_scalar.to_string(),
            g: self.g.to_poly2().to_string(),
            g_triple: &self.g_triple,
        }
        .serialize(s)
    }
}

fn dv(x: i64) -> DegreeValue {
    DegreeValue::from_slice(&[x])
}

fn deg(p: &Polynomial, ws: &WeightSystem) -> i64 {
    let d = p.degw(ws);
    if d.is_bottom() {
        i64::MIN
    } else {
        d.comps()[0]
    }
}

/// One Newton start: directions move `(g1, g2)` of the type's notation.
struct Setup {
    s: i64,
    g1: Polynomial,
    g2: Polynomial,
    /// Per scalar `(α, β, γ)`: its direction on `(g1, g2)`, if free.
    dirs: Vec<(usize, Polynomial, Polynomial)>,
    init: [Coeff; 3],
}

/// Degrees of the shape hypotheses for one `F_σ`: `(l, s)`.
fn shape_i_ii(d: [i64; 3]) -> Option<(i64, i64)> {
    if d[0] <= 0 || d[0] % 2 != 0 {
        return None;
    }
    let l = d[0] / 2;
    if d[1] % l != 0 {
        return None;
    }
    let s = d[1] / l;
    (s >= 3 && s % 2 == 1).then_some((l, s))
}

/// Scan `σ` for a reduction of the given type.
pub fn detect_type(ws: &WeightSystem, f: &Endo3, which: TypeKind, limits: &SearchLimits) -> Result<Found<TypeWitness>> {
    if !ws.is_total_degree() || ws.n() != 3 {
        return Err(Error::Precondition("type detectors require the weight (1,1,1)".into()));
    }
    if !f.is_independent() {
        return Err(Error::Dependent);
    }
    let mut rigorous = true;
    let mut notes = Vec::new();
    for perm in PERMUTATIONS {
        let fs = f.permute(perm);
        let setups = match setups(ws, &fs, which) {
            Ok(v) => v,
            Err(why) => {
                notes.push(format!("sigma {:?}: {why}", perm.map(|i| i + 1)));
                continue;
            }
        };
        let mut found = None;
        for (l, setup) in setups {
            if let Some(w) = run(ws, &fs, which, l, &setup, limits) {
                found = Some(w);
                break;
            }
        }
        match found {
            Some(w) => {
                let g_triple = w.g_triple.unpermute(perm);
                return Ok(Ok(TypeWitness { perm, g_triple, ..w }));
            }
            None => {
                rigorous = false;
                notes.push(format!("sigma {:?}: no witness within limits", perm.map(|i| i + 1)));
            }
        }
    }
    let reason = if rigorous { Reason::DegreeShape } else { Reason::LimitsExhausted };
    Ok(Err(Absence::new(reason, notes.join("; "))))
}

/// The type scan over all four kinds.
pub fn detect_types(ws: &WeightSystem, f: &Endo3, limits: &SearchLimits) -> Result<Vec<TypeWitness>> {
    let mut out = Vec::new();
    for k in TypeKind::ALL {
        if let Ok(w) = detect_type(ws, f, k, limits)? {
            out.push(w);
        }
    }
    Ok(out)
}

fn unit(i: usize) -> [Coeff; 3] {
    let mut v = [Coeff::zero(), Coeff::zero(), Coeff::zero()];
    v[i] = Coeff::one();
    v
}

fn setups(ws: &WeightSystem, f: &Endo3, which: TypeKind) -> std::result::Result<Vec<(i64, Setup)>, String> {
    let [f1, f2, f3] = &f.f;
    let d = [deg(f1, ws), deg(f2, ws), deg(f3, ws)];
    let (w1, w2, w3) = (f1.lf(ws), f2.lf(ws), f3.lf(ws));
    let zero = || Polynomial::zero(3);
    match which {
        TypeKind::I => {
            let (l, s) = shape_i_ii(d).ok_or("degrees are not (2l, sl)")?;
            if !(2 * l < d[2] && d[2] <= s * l) {
                return Err("deg f3 outside (2l, sl]".into());
            }
            if homogeneous_membership(ws, &w3, &w1, &w2).map_err(|e| e.to_string())?.is_some() {
                return Err("f3^w lies in k[f1^w, f2^w]".into());
            }
            let (_, h) = root_up_to_scalar(&w1, 2).ok_or("f1^w is not a square up to scalar")?;
            let dir = vec![(0, zero(), -f3)];
            if d[2] == s * l {
                let x = decompose(&w2, &[w3.clone(), h.pow(s as u32)]).ok_or("no alpha makes g2^w an s-th power")?;
                if x[0].is_zero() || x[1].is_zero() {
                    return Err("leading solve gives alpha = 0 or kills g2^w".into());
                }
                let init = [x[0].clone(), Coeff::zero(), Coeff::zero()];
                return Ok(vec![(l, Setup { s, g1: f1.clone(), g2: f2.clone(), dirs: dir, init })]);
            }
            if w2.pow(2).proportional_to(&h.pow(2 * s as u32)).is_none() {
                return Err("f2^w is not an s-th power of sqrt(f1^w)".into());
            }
            Ok([Coeff::zero(), Coeff::one(), -Coeff::one()]
                .into_iter()
                .map(|a| (l, Setup { s, g1: f1.clone(), g2: f2.clone(), dirs: dir.clone(), init: [a, Coeff::zero(), Coeff::zero()] }))
                .collect())
        }
        TypeKind::II => {
            let (l, s) = shape_i_ii(d).ok_or("degrees are not (2l, sl)")?;
            if s != 3 || !(3 * l < 2 * d[2] && d[2] <= 2 * l) {
                return Err("need s = 3 and deg f3 in (3l/2, 2l]".into());
            }
            if w1.proportional_to(&w3).is_some() {
                return Err("f1^w ~ f3^w".into());
            }
            let (_, h) = root_up_to_scalar(&w2, 3).ok_or("f2^w is not a cube up to scalar")?;
            let dirs = vec![(0, -f3, zero()), (1, zero(), -f3)];
            if d[2] == 2 * l {
                let x = decompose(&w1, &[w3.clone(), h.pow(2)]).ok_or("no alpha makes g1^w a square")?;
                if x[1].is_zero() {
                    return Err("cancellation kills g1^w".into());
                }
                let mut out = vec![(l, Setup { s, g1: f1.clone(), g2: f2.clone(), dirs: dirs.clone(), init: [x[0].clone(), Coeff::zero(), Coeff::zero()] })];
                out.push((l, Setup { s, g1: f1.clone(), g2: f2.clone(), dirs, init: [x[0].clone(), Coeff::one(), Coeff::zero()] }));
                return Ok(out);
            }
            if w1.pow(3).proportional_to(&h.pow(6)).is_none() {
                return Err("f1^w is not a square of cbrt(f2^w)".into());
            }
            Ok([unit(2), unit(0), unit(1)]
                .into_iter()
                .map(|init| (l, Setup { s, g1: f1.clone(), g2: f2.clone(), dirs: dirs.clone(), init }))
                .collect())
        }
        TypeKind::III | TypeKind::IV => {
            if d[0] <= 0 || d[0] % 2 != 0 {
                return Err("deg f1 is not even".into());
            }
            let l = d[0] / 2;
            let first = d[1] == 3 * l && l < d[2] && 2 * d[2] <= 3 * l;
            let second = 5 * l < 2 * d[1] && d[1] <= 3 * l && 2 * d[2] == 3 * l;
            if !(first || second) {
                return Err("degrees match neither shape for types III and IV".into());
            }
            let (_, h) = root_up_to_scalar(&w1, 2).ok_or("f1^w is not a square up to scalar")?;
            let mut dirs = vec![(1, -f3, zero()), (2, zero(), -f3)];
            let use_alpha = 2 * d[2] == 3 * l;
            let mut init_alpha = Coeff::zero();
            if use_alpha {
                let top = if d[1] == 3 * l { w2.clone() } else { zero() };
                let x = decompose(&top, &[h.pow(3), w3.pow(2)]).ok_or("no alpha makes g2^w a cube of sqrt(f1^w)")?;
                if x[0].is_zero() {
                    return Err("cancellation kills g2^w".into());
                }
                init_alpha = x[1].clone();
            } else if w2.pow(2).proportional_to(&h.pow(6)).is_none() {
                return Err("f2^w is not a cube of sqrt(f1^w)".into());
            }
            dirs.push((0, zero(), -&f3.pow(2)));
            let mut starts = vec![[init_alpha.clone(), Coeff::zero(), Coeff::zero()]];
            if which == TypeKind::III && init_alpha.is_zero() {
                starts.extend([unit(1), unit(2), unit(0)]);
            }
            Ok(starts.into_iter().map(|init| (l, Setup { s: 3, g1: f1.clone(), g2: f2.clone(), dirs: dirs.clone(), init })).collect())
        }
    }
}

fn run(ws: &WeightSystem, f: &Endo3, which: TypeKind, l: i64, st: &Setup, limits: &SearchLimits) -> Option<TypeWitness> {
    let f3 = &f.f[2];
    let d3 = deg(f3, ws);
    let s = st.s;
    // y1 is the type's g2 (degree sl), y2 its g1 (degree 2l).
    let mut g1 = st.g1.clone();
    let mut g2 = st.g2.clone();
    for (k, b1, b2) in &st.dirs {
        g1.add_scaled(b1, &st.init[*k]);
        g2.add_scaled(b2, &st.init[*k]);
    }
    if deg(&g1, ws) != 2 * l || deg(&g2, ws) != s * l {
        return None;
    }
    let lambda = g2.lf(ws).pow(2).proportional_to(&g1.lf(ws).pow(s as u32))?;
    let monos = monomials(s);
    let mut c = vec![Coeff::zero(); monos.len()];
    c[0] = -lambda;
    let ansatz = Ansatz {
        g1: st.g2.clone(),
        g2: st.g1.clone(),
        dirs: st.dirs.iter().map(|(_, b1, b2)| (b2.clone(), b1.clone())).collect(),
        theta: st.dirs.iter().map(|(k, _, _)| st.init[*k].clone()).collect(),
        lead: (2, 0),
        monos,
        c,
        extra: f3.clone(),
        nu: Coeff::zero(),
    };
    let scalars = |stt: &NewtonState| {
        let mut v = [Coeff::zero(), Coeff::zero(), Coeff::zero()];
        for ((k, _, _), t) in st.dirs.iter().zip(&stt.theta) {
            v[*k] = t.clone();
        }
        v
    };
    let ok_shape = |stt: &NewtonState| deg(&stt.g2, ws) == 2 * l && deg(&stt.g1, ws) == s * l && !stt.nu.is_zero();
    let wedge_ok = |stt: &NewtonState, bound: i64| {
        let w12 = deg_wedge(ws, &[stt.g2.clone(), stt.g1.clone()]).comps()[0];
        let w13 = deg_wedge(ws, &[stt.g2.clone(), stt.d.clone()]);
        (w13 < dv(bound + w12), w12)
    };
    let type_iv_mu = |stt: &NewtonState| -> Option<Coeff> {
        let g3 = &stt.d;
        if 2 * deg(g3, ws) != 3 * l {
            return None;
        }
        let mu = stt.g1.lf(ws).proportional_to(&g3.lf(ws).pow(2))?;
        (deg(&(&stt.g1 - &g3.pow(2).scale(&mu)), ws) <= 2 * l).then_some(mu)
    };
    let accept = |stt: &NewtonState| {
        if !ok_shape(stt) {
            return false;
        }
        let sc = scalars(stt);
        let dd = deg(&stt.d, ws);
        match which {
            TypeKind::I => !sc[0].is_zero() && dd < d3 && wedge_ok(stt, s * l).0,
            TypeKind::II => !(sc[0].is_zero() && sc[1].is_zero()) && dd < d3 && wedge_ok(stt, 3 * l).0,
            TypeKind::III => {
                let (ok, w12) = wedge_ok(stt, 3 * l);
                sc.iter().any(|x| !x.is_zero()) && 2 * dd <= 3 * l && ok && dd < l + w12
            }
            TypeKind::IV => 2 * dd <= 3 * l && wedge_ok(stt, 3 * l).0 && type_iv_mu(stt).is_some(),
        }
    };
    let stt = solve(ws, ansatz, limits.newton_rounds(), accept)?;
    let sc = scalars(&stt);
    // Types I and II normalize σ = 1; III and IV keep g3 = ν f3 + P.
    let (sigma_scalar, scale) = match which {
        TypeKind::I | TypeKind::II => (Coeff::one(), Coeff::one() / &stt.nu),
        _ => (stt.nu.clone(), Coeff::one()),
    };
    let mut g = BiPoly::new(stt.g2.clone(), stt.g1.clone());
    for (m, coef) in stt.p.terms() {
        g.add((m.exp(1) as u32, m.exp(0) as u32), coef * &scale);
    }
    let g3 = stt.d.scale(&scale);
    let mu = if which == TypeKind::IV { type_iv_mu(&stt) } else { None };
    let [alpha, beta, gamma] = sc;
    Some(TypeWitness {
        kind: which,
        perm: [0, 1, 2],
        l,
        s,
        alpha,
        beta,
        gamma,
        mu,
        sigma_scalar,
        g,
        g_triple: Endo3::new(stt.g2.clone(), stt.g1.clone(), g3),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{q, qr};
    use crate::su::planted_su_pair;
    use crate::text::parse_polynomial;

    #[test]
    fn affine_maps_have_no_type() {
        let ws = WeightSystem::total_degree(3);
        let p = |s| parse_polynomial(s, 3).unwrap();
        let f = Endo3::new(p("x1 + x2"), p("x2 - 3"), p("x3 + x1"));
        for k in TypeKind::ALL {
            let r = detect_type(&ws, &f, k, &SearchLimits::default()).unwrap();
            assert_eq!(r.unwrap_err().reason, Reason::DegreeShape);
        }
        assert!(detect_type(&WeightSystem::lex_unit(3), &f, TypeKind::I, &SearchLimits::default()).is_err());
    }

    #[test]
    fn planted_su_pair_gives_type_i_after_swap() {
        let ws = WeightSystem::total_degree(3);
        for (c, mu) in [(q(2), q(-1)), (qr(1, 3), q(5))] {
            let (f, _) = planted_su_pair(&c, &mu);
            let tau = [1, 0, 2];
            let ft = f.permute(tau);
            let found = detect_types(&ws, &ft, &SearchLimits::default()).unwrap();
            let kinds: Vec<TypeKind> = found.iter().map(|w| w.kind).collect();
            assert_eq!(kinds, vec![TypeKind::I]);
            let w = &found[0];
            assert_eq!(w.alpha, -c.clone());
            let gs = w.g_triple.permute(w.perm);
            let fs = ft.permute(w.perm);
            assert_eq!(gs.f[2], &fs.f[2] + &w.g.value());
        }
    }
}
