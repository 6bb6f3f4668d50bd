//! Univariate view, leading-form membership and reduction discovery.

mod common;

use common::{build, nonzero_terms, terms, terms_in, weight, weight_index};
use proptest::prelude::*;
use tame3_core::endo::Endo3;
use tame3_core::search::{find_elementary_reduction, find_scaled_pair, homogeneous_membership, SearchLimits};
use tame3_core::su::{check_quasi_su, check_su_conditions, planted_su_pair};
use tame3_core::sured::find_su_reduction;
use tame3_core::univariate::{aux_degree, aux_multiplicity, eval_aux, su_inequality_report, AuxPoly, Verdict};
use tame3_core::{q, qr, Polynomial, WeightSystem};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn aux(coeffs: &[common::Terms]) -> AuxPoly {
    AuxPoly::from_coeffs(3, coeffs.iter().enumerate().map(|(i, t)| (i as u32, build(t))))
}

/// `(c0 x1 + φ(x2, x3), c1 x2 + ψ(x3), c2 x3)`.
fn triangular(c: &[i64], phi: &common::Terms, psi: &common::Terms) -> Endo3 {
    let x = |i| Polynomial::var(3, i);
    Endo3::new(&x(0).scale(&q(c[0])) + &build(phi), &x(1).scale(&q(c[1])) + &build(psi), x(2).scale(&q(c[2])))
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn horner_matches_direct_sum(coeffs in prop::collection::vec(terms(2, 3), 1..=4), g in terms(2, 3)) {
        let phi = aux(&coeffs);
        let g = build(&g);
        let direct = coeffs.iter().enumerate().fold(Polynomial::zero(3), |acc, (i, t)| &acc + &(&build(t) * &g.pow(i as u32)));
        prop_assert_eq!(eval_aux(&phi, &g), direct);
    }

    #[test]
    fn multiplicity_shifts_the_auxiliary_degree(
        k in weight_index(),
        coeffs in prop::collection::vec(terms(2, 3), 1..=4),
        g in nonzero_terms(2, 3),
    ) {
        let ws = weight(k);
        let (phi, g) = (aux(&coeffs), build(&g));
        prop_assume!(!phi.is_zero() && !g.is_constant());
        let d = aux_degree(&ws, &phi, &g).unwrap();
        prop_assert!(eval_aux(&phi, &g).degw(&ws) <= d);
        let m = aux_multiplicity(&ws, &phi, &g).unwrap();
        prop_assert!(m <= phi.y_degree().unwrap());
        if m >= 1 {
            let d1 = aux_degree(&ws, &phi.derivative(), &g).unwrap();
            prop_assert_eq!(d1, d.sub(&g.degw(&ws)));
        }
    }

    #[test]
    fn weighted_inequality_is_never_violated(
        k in weight_index(),
        r in 1usize..=3,
        c in prop::collection::vec(1i64..=2, 3),
        phi_t in terms_in(&[1, 2], 2, 2),
        psi_t in terms_in(&[2], 2, 2),
        coeffs in prop::collection::vec(terms(2, 2), 1..=3),
        g in nonzero_terms(2, 3),
    ) {
        let ws = weight(k);
        let f = triangular(&c, &phi_t, &psi_t);
        let fs: Vec<Polynomial> = f.f[..r].to_vec();
        let mut subs = fs.clone();
        subs.resize(3, Polynomial::zero(3));
        // coefficients in k[f_1, ..., f_r]
        let phi = AuxPoly::from_coeffs(3, coeffs.iter().enumerate().map(|(i, t)| (i as u32, build(t).compose(&subs).unwrap())));
        let g = build(&g);
        prop_assume!(!phi.is_zero() && !g.is_constant());
        let report = su_inequality_report(&ws, &fs, &phi, &g).unwrap();
        prop_assert_ne!(report.holds, Verdict::Violated, "{:?}", report);
    }

    #[test]
    fn homogeneous_membership_recomposes(
        k in weight_index(),
        a in nonzero_terms(2, 3),
        b in nonzero_terms(2, 3),
        e in (0u32..=2, 0u32..=2),
        c in -3i64..=3,
    ) {
        let ws = weight(k);
        let (g1, g2) = (build(&a).lf(&ws), build(&b).lf(&ws));
        prop_assume!(!g1.is_constant() && !g2.is_constant());
        let mut h = &g1.pow(e.0) * &g2.pow(e.1);
        if g1.degw(&ws) == g2.degw(&ws) && c != 0 {
            h = &h + &g1.pow(e.0 + e.1).scale(&q(c));
        }
        prop_assume!(!h.is_zero());
        let rep = homogeneous_membership(&ws, &h, &g1, &g2).unwrap();
        prop_assert!(rep.is_some());
        prop_assert_eq!(rep.unwrap().value(), h);
    }

    #[test]
    fn scaled_pairs_are_found_for_common_roots(
        k in weight_index(),
        t in nonzero_terms(2, 3),
        a in 1u32..=3,
        b in 1u32..=3,
        c in 1i64..=4,
    ) {
        let ws = weight(k);
        let h = build(&t).lf(&ws);
        prop_assume!(!h.is_constant());
        let (fw, gw) = (h.pow(a), h.pow(b).scale(&q(c)));
        let sp = find_scaled_pair(&ws, &fw, &gw);
        prop_assert!(sp.is_some());
        let sp = sp.unwrap();
        prop_assert_eq!(num_integer::gcd(sp.p, sp.q), 1);
        prop_assert_eq!(gw.pow(sp.p), fw.pow(sp.q).scale(&sp.scalar));
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn elementary_steps_lower_only_the_named_component(
        c in prop::collection::vec(1i64..=3, 3),
        phi in terms_in(&[1, 2], 3, 3),
        psi in terms_in(&[2], 3, 2),
    ) {
        let ws = WeightSystem::total_degree(3);
        let f = triangular(&c, &phi, &psi);
        prop_assume!(f.degree(&ws) > *ws.total());
        let step = find_elementary_reduction(&ws, &f, &SearchLimits::default()).unwrap();
        prop_assert!(step.is_ok(), "{:?}", step.err());
        let step = step.unwrap();
        let g = step.apply(&f);
        prop_assert!(step.degree_after < step.degree_before);
        prop_assert_eq!(g.f[step.index].degw(&ws), step.degree_after.clone());
        let (j, l) = step.others();
        prop_assert_eq!(&g.f[j], &f.f[j]);
        prop_assert_eq!(&g.f[l], &f.f[l]);
        prop_assert!(g.degree(&ws) < f.degree(&ws));
    }
}

proptest! {
    #![proptest_config(config(6))]

    #[test]
    fn planted_pairs_are_su_and_quasi_su(c in -2i64..=2, mu_n in 1i64..=3, mu_d in 1i64..=2, sign in prop::bool::ANY) {
        let ws = WeightSystem::total_degree(3);
        let mu = if sign { qr(mu_n, mu_d) } else { qr(-mu_n, mu_d) };
        let (f, g) = planted_su_pair(&q(c), &mu);
        let su = check_su_conditions(&ws, &f, &g).unwrap();
        prop_assert!(su.overall(), "{:?}", su.failures());
        prop_assert!(check_quasi_su(&ws, &f, &g).unwrap().overall());
        let step = find_su_reduction(&ws, &f, &SearchLimits::default()).unwrap();
        if let Ok(step) = step {
            prop_assert_eq!(step.witness.apply(&f), step.g.clone());
            prop_assert!(step.degree_after < step.degree_before);
        }
    }
}
