//! Algebraic laws of the exact operator arithmetic, checked on random
//! operators with `Q[eps][x, 1/x]` coefficients.

use commuting_ops::cli::print::{from_json, to_json};
use commuting_ops::cli::{parse_op, print_op, Format};
use commuting_ops::diffop::DiffOp;
use commuting_ops::exact::{int, is_canonical, rat, Rational, XLaurent, XZFraction, XZPoly, ZSeries};
use proptest::prelude::*;

mod common;
use common::*;

const CASES: u32 = 1000;

fn xz_poly(min_z: u32) -> impl Strategy<Value = XZPoly> {
    prop::collection::vec((small_rational(), 0u32..=2, 0u32..=4, min_z..=min_z + 3), 0..=4).prop_map(XZPoly::from_terms)
}

/// A polynomial whose `z^0` part is the unit `c x^i`.
fn xz_unit_denominator() -> impl Strategy<Value = XZPoly> {
    ((1i64..=9, 1i64..=4), 0u32..=3, xz_poly(1))
        .prop_map(|((n, d), i, rest)| &XZPoly::term(rat(n, d), 0, i, 0) + &rest)
}

fn series_from_one() -> impl Strategy<Value = ZSeries> {
    prop::collection::vec(coefficient(), 0..=5).prop_map(|tail| {
        let mut coeffs = vec![XLaurent::one()];
        coeffs.extend(tail);
        ZSeries::exact(0, coeffs)
    })
}

/// Whether `a` and `b` agree on `z^lo..z^hi`.
fn agree(a: &ZSeries, b: &ZSeries, lo: i32, hi: i32) -> bool {
    (lo..=hi).all(|k| a.coeff(k).unwrap_or_default() == b.coeff(k).unwrap_or_default())
}

fn nonzero_point() -> impl Strategy<Value = (Rational, Rational)> {
    ((1i64..=7, 1i64..=4), (-5i64..=5, 1i64..=3)).prop_map(|((xn, xd), (en, ed))| (rat(xn, xd), rat(en, ed)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn coefficient_ring_axioms(f in coefficient(), g in coefficient(), h in coefficient()) {
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert!((&f - &f).is_zero());
        prop_assert_eq!(&f * &XLaurent::one(), f);
    }

    #[test]
    fn coefficient_product_rule(f in coefficient(), g in coefficient()) {
        prop_assert_eq!((&f * &g).derive(), &(&f.derive() * &g) + &(&f * &g.derive()));
    }

    #[test]
    fn rationals_stay_canonical(f in coefficient(), g in coefficient(), a in small_rational(), b in small_rational()) {
        let p = &(&f * &g).scale(&a) - &g.scale(&b);
        for (_, _, c) in p.monomials() {
            prop_assert!(is_canonical(c) && *c != int(0));
        }
        prop_assert!(is_canonical(&(&a * &b - &b / &rat(7, 3))));
    }

    #[test]
    fn series_sqrt_round_trip(s in series_from_one(), order in 4usize..=10) {
        let r = s.sqrt(order).unwrap();
        prop_assert!(agree(&r.multiply(&r), &s, 0, order as i32));
        prop_assert!(r.precision().is_some_and(|p| p > order as i32));
    }

    #[test]
    fn fraction_to_series_round_trip(num in xz_poly(0), den in xz_unit_denominator(), order in 4usize..=10) {
        let f = XZFraction::new(num.clone(), den.clone()).unwrap();
        let s = f.to_series(order).unwrap();
        let back = s.multiply(&den.to_series());
        // an exact zero numerator gives an exact zero series
        let hi = s.precision().map_or(order as i32 + 8, |p| p - 1);
        prop_assert!(hi >= order as i32);
        prop_assert!(agree(&back, &num.to_series(), 0, hi));
    }

    #[test]
    fn addition_is_an_abelian_group(a in operator(3), b in operator(3), c in operator(3)) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.add(&Op::zero()), a.clone());
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.neg().neg(), a);
    }

    #[test]
    fn composition_is_associative_and_unital(a in operator(2), b in operator(2), c in operator(2)) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert_eq!(a.compose(&Op::identity()), a.clone());
        prop_assert_eq!(Op::identity().compose(&a), a);
    }

    #[test]
    fn composition_distributes(a in operator(2), b in operator(2), c in operator(2)) {
        prop_assert_eq!(a.compose(&b.add(&c)), a.compose(&b).add(&a.compose(&c)));
        prop_assert_eq!(a.add(&b).compose(&c), a.compose(&c).add(&b.compose(&c)));
    }

    #[test]
    fn composition_matches_action_on_functions(a in operator(3), b in operator(3), f in coefficient()) {
        // independent of the composition formula: apply B, then A
        prop_assert_eq!(a.compose(&b).apply(&f), a.apply(&b.apply(&f)));
    }

    #[test]
    fn leibniz_rule(f in coefficient(), g in coefficient(), k in 0usize..=4) {
        // D^k (f g) = sum binom(k, j) f^(j) g^(k - j)
        let lhs = Op::d_pow(k).apply(&(&f * &g));
        let mut rhs = XLaurent::zero();
        let mut binom = int(1);
        for j in 0..=k {
            rhs = &rhs + &(&f.nth_derivative(j) * &g.nth_derivative(k - j)).scale(&binom);
            binom = binom * int((k - j) as i64) / int(j as i64 + 1);
        }
        prop_assert_eq!(lhs, rhs);
        // [D, f] = f'
        let m = DiffOp::multiplication(f.clone());
        prop_assert_eq!(Op::d_pow(1).commutator(&m), DiffOp::multiplication(f.derive()));
    }

    #[test]
    fn jacobi_identity(a in operator(2), b in operator(2), c in operator(2)) {
        let j = a.commutator(&b.commutator(&c))
            .add(&b.commutator(&c.commutator(&a)))
            .add(&c.commutator(&a.commutator(&b)));
        prop_assert!(j.is_zero());
        prop_assert_eq!(a.commutator(&b), b.commutator(&a).neg());
    }

    #[test]
    fn order_of_a_composition_adds(a in operator(3), b in operator(3)) {
        // the leading coefficients multiply in an integral domain
        let ab = a.compose(&b);
        match (a.order(), b.order()) {
            (Some(p), Some(q)) => prop_assert_eq!(ab.order(), Some(p + q)),
            _ => prop_assert!(ab.is_zero()),
        }
    }

    #[test]
    fn right_reduction_round_trip(a in operator(5), t in operator(2), lead in 1usize..=3) {
        let mut coeffs = t.coeffs().to_vec();
        coeffs.truncate(lead);
        coeffs.resize(lead, XLaurent::zero());
        coeffs.push(XLaurent::one());
        let t = DiffOp::new(coeffs);
        let (q, r) = a.right_reduce(&t).unwrap();
        prop_assert_eq!(q.compose(&t).add(&r), a);
        prop_assert!(r.order().is_none_or(|o| o < lead));
    }

    #[test]
    fn eps_specialization_is_a_ring_map(a in operator(2), b in operator(2), (_, e) in nonzero_point()) {
        prop_assert_eq!(a.compose(&b).specialize_eps(&e), a.specialize_eps(&e).compose(&b.specialize_eps(&e)));
        prop_assert_eq!(a.add(&b).specialize_eps(&e), a.specialize_eps(&e).add(&b.specialize_eps(&e)));
    }

    #[test]
    fn coefficient_products_evaluate_pointwise(f in coefficient(), g in coefficient(), (x, e) in nonzero_point()) {
        let fg = (&f * &g).eval(&x, &e).unwrap();
        prop_assert_eq!(fg, f.eval(&x, &e).unwrap() * g.eval(&x, &e).unwrap());
        let sum = (&f + &g).eval(&x, &e).unwrap();
        prop_assert_eq!(sum, f.eval(&x, &e).unwrap() + g.eval(&x, &e).unwrap());
    }

    #[test]
    fn text_round_trip(a in operator(4)) {
        prop_assert_eq!(parse_op(&a.to_string()).unwrap(), a.clone());
        prop_assert_eq!(parse_op(&print_op(&a, Format::Text)).unwrap(), a);
    }

    #[test]
    fn json_round_trip(a in operator(4)) {
        prop_assert_eq!(from_json(&to_json(&a)).unwrap(), a);
    }

    #[test]
    fn parser_agrees_with_direct_construction(e in expr()) {
        let text = e.text();
        prop_assert_eq!(parse_op(&text).unwrap(), e.value(), "{}", text);
    }
}
