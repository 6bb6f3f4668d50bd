//! Graded arithmetic, text round trips and exterior differentials.

mod common;

use common::{build, nonzero_terms, terms, weight, weight_index};
use proptest::prelude::*;
use tame3_core::forms::{deg_w_form, differential, wedge, wedge_differentials};
use tame3_core::{parse_polynomial, semigroup_member, DegreeValue, Polynomial, WeightSystem};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

fn brute_semigroup(d: &[i64], d1: &[i64], d2: &[i64]) -> bool {
    // every entry is nonnegative and d1, d2 are nonzero, so p + q <= Σ d
    let bound: i64 = d.iter().sum();
    (0..=bound).any(|p| (0..=bound - p).any(|q| d.iter().zip(d1).zip(d2).all(|((x, a), b)| *x == p * a + q * b)))
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn degree_of_product_is_additive(k in weight_index(), a in nonzero_terms(3, 4), b in nonzero_terms(3, 4)) {
        let ws = weight(k);
        let (f, g) = (build(&a), build(&b));
        prop_assert_eq!((&f * &g).degw(&ws), f.degw(&ws).add(&g.degw(&ws)));
    }

    #[test]
    fn degree_of_sum_is_bounded(k in weight_index(), a in nonzero_terms(3, 4), b in nonzero_terms(3, 4)) {
        let ws = weight(k);
        let (f, g) = (build(&a), build(&b));
        let (df, dg) = (f.degw(&ws), g.degw(&ws));
        let ds = (&f + &g).degw(&ws);
        prop_assert!(ds <= DegreeValue::max(&df, &dg));
        if df != dg {
            prop_assert_eq!(ds, DegreeValue::max(&df, &dg));
        }
    }

    #[test]
    fn leading_form_is_idempotent_and_multiplicative(k in weight_index(), a in nonzero_terms(3, 4), b in nonzero_terms(3, 4)) {
        let ws = weight(k);
        let (f, g) = (build(&a), build(&b));
        let lf = f.lf(&ws);
        prop_assert!(lf.is_homogeneous(&ws));
        prop_assert_eq!(lf.lf(&ws), lf.clone());
        prop_assert_eq!(lf.degw(&ws), f.degw(&ws));
        prop_assert_eq!((&f * &g).lf(&ws), &lf * &g.lf(&ws));
    }

    #[test]
    fn total_weight_is_total_degree(a in nonzero_terms(4, 5)) {
        let f = build(&a);
        let d = f.degw(&WeightSystem::total_degree(3));
        prop_assert_eq!(d, DegreeValue::from_slice(&[i64::from(f.total_degree().unwrap())]));
    }

    #[test]
    fn semigroup_membership_matches_brute_force(
        d in prop::collection::vec(0i64..=8, 2),
        d1 in prop::collection::vec(0i64..=3, 2),
        d2 in prop::collection::vec(0i64..=3, 2),
    ) {
        prop_assume!(d1.iter().any(|c| *c > 0) && d2.iter().any(|c| *c > 0));
        let v = |x: &[i64]| DegreeValue::from_slice(x);
        let found = semigroup_member(&v(&d), &v(&d1), &v(&d2));
        prop_assert_eq!(found.is_some(), brute_semigroup(&d, &d1, &d2));
        if let Some((p, q)) = found {
            let (p, q) = (p as i64, q as i64);
            prop_assert!(d.iter().zip(&d1).zip(&d2).all(|((x, a), b)| *x == p * a + q * b));
        }
    }

    #[test]
    fn composition_is_associative(
        f in terms(2, 3),
        g in prop::collection::vec(terms(1, 3), 3),
        h in prop::collection::vec(terms(1, 3), 3),
    ) {
        let f = build(&f);
        let g: Vec<Polynomial> = g.iter().map(build).collect();
        let h: Vec<Polynomial> = h.iter().map(build).collect();
        let gh: Vec<Polynomial> = g.iter().map(|gi| gi.compose(&h).unwrap()).collect();
        prop_assert_eq!(f.compose(&g).unwrap().compose(&h).unwrap(), f.compose(&gh).unwrap());
    }

    #[test]
    fn text_round_trips(a in terms(4, 6), num in -5i64..=5, den in 1i64..=4) {
        let f = &build(&a) + &Polynomial::constant(3, tame3_core::qr(num, den));
        prop_assert_eq!(parse_polynomial(&f.to_string(), 3).unwrap(), f);
    }

    #[test]
    fn differential_obeys_leibniz(a in terms(3, 4), b in terms(3, 4)) {
        let (f, g) = (build(&a), build(&b));
        let lhs = differential(&(&f * &g));
        let rhs = differential(&g).mul_function(&f).add(&differential(&f).mul_function(&g));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn wedge_is_graded_and_antisymmetric(k in weight_index(), a in nonzero_terms(3, 4), b in nonzero_terms(3, 4)) {
        let ws = weight(k);
        let (da, db) = (differential(&build(&a)), differential(&build(&b)));
        let ab = wedge(&da, &db);
        prop_assert_eq!(ab.clone(), wedge(&db, &da).scale(&tame3_core::q(-1)));
        if !ab.is_zero() {
            prop_assert!(deg_w_form(&ws, &ab) <= deg_w_form(&ws, &da).add(&deg_w_form(&ws, &db)));
        }
    }

    #[test]
    fn top_form_degree_is_sandwiched(
        k in weight_index(),
        p1 in common::terms_in(&[1, 2], 3, 3),
        p2 in common::terms_in(&[2], 3, 2),
        c in prop::collection::vec(1i64..=3, 3),
    ) {
        let ws = weight(k);
        let x = |i| Polynomial::var(3, i);
        let fs = [
            &x(0).scale(&tame3_core::q(c[0])) + &build(&p1),
            &x(1).scale(&tame3_core::q(c[1])) + &build(&p2),
            x(2).scale(&tame3_core::q(c[2])),
        ];
        let omega = wedge_differentials(&fs);
        prop_assert!(!omega.is_zero());
        let d = deg_w_form(&ws, &omega);
        let sum = fs.iter().fold(DegreeValue::zero(ws.r()), |acc, f| acc.add(&f.degw(&ws)));
        prop_assert!(&d <= &sum);
        prop_assert!(&d >= ws.total());
    }
}
