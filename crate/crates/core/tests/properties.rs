use proptest::prelude::*;

use stickel_core::arith::{gcd, rat, AdicRing, CyclotomicNumber, PadicNumber, Rational};
use stickel_core::bernoulli::char_eval;
use stickel_core::field::{AbelianField, RationalElement};
use stickel_core::logval::{logval_rational, Place};
use stickel_core::stickelberger::{stickelberger, twist_factor, twisted_stickelberger};
use stickel_core::tower::{IwasawaElement, TowerContext};

// (conductor, kernel generators)
const FIELDS: [(u64, &[i64]); 6] = [
    (5, &[]),
    (7, &[2]),
    (12, &[]),
    (15, &[4]),
    (16, &[7]),
    (21, &[4]),
];

fn field_strategy() -> impl Strategy<Value = AbelianField> {
    (0..FIELDS.len()).prop_map(|i| AbelianField::new(FIELDS[i].0, FIELDS[i].1).unwrap())
}

fn element(field: &AbelianField, data: &[(i64, i64)]) -> RationalElement {
    let terms = field
        .reps()
        .iter()
        .zip(data)
        .map(|(&r, &(n, d))| (r, rat(n, d)));
    RationalElement::from_terms(field, &(), terms)
}

fn coeffs() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-20i64..=20, 1i64..=6), 16)
}

fn tower_strategy() -> impl Strategy<Value = (TowerContext, Vec<Vec<u64>>, Vec<Vec<u64>>)> {
    prop_oneof![Just((3u64, 6u32, 5usize)), Just((5, 4, 4)), Just((3, 4, 6))].prop_flat_map(
        |(ell, m, n)| {
            let ctx = TowerContext::new(ell, &AbelianField::cyclotomic(ell), m, n).unwrap();
            let modulus = ctx.ring().modulus();
            let shape =
                prop::collection::vec(prop::collection::vec(0..modulus, ctx.delta_order()), n);
            (Just(ctx), shape.clone(), shape)
        },
    )
}

fn iw(ctx: &TowerContext, raw: Vec<Vec<u64>>) -> IwasawaElement {
    IwasawaElement::from_raw(ctx, raw, ctx.precision(), false).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn group_ring_is_commutative_and_associative(field in field_strategy(), a in coeffs(), b in coeffs(), c in coeffs()) {
        let (x, y, z) = (element(&field, &a), element(&field, &b), element(&field, &c));
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
        prop_assert_eq!(x.mul(&y.add(&z).unwrap()).unwrap(), x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap());
    }

    #[test]
    fn inversion_is_an_involutive_ring_map(field in field_strategy(), a in coeffs(), b in coeffs()) {
        let (x, y) = (element(&field, &a), element(&field, &b));
        prop_assert_eq!(x.inversion().inversion(), x.clone());
        prop_assert_eq!(x.mul(&y).unwrap().inversion(), x.inversion().mul(&y.inversion()).unwrap());
    }

    #[test]
    fn restriction_is_a_ring_map(a in coeffs(), b in coeffs(), sub in 0usize..3) {
        let big = AbelianField::cyclotomic(21);
        let small = [AbelianField::cyclotomic(3), AbelianField::cyclotomic(7), AbelianField::new(21, &[4]).unwrap()][sub].clone();
        let (x, y) = (element(&big, &a), element(&big, &b));
        let lhs = x.mul(&y).unwrap().restrict(&small).unwrap();
        let rhs = x.restrict(&small).unwrap().mul(&y.restrict(&small).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn characters_are_homomorphisms(field in field_strategy(), a in coeffs(), b in coeffs()) {
        let (x, y) = (element(&field, &a), element(&field, &b));
        let xy = x.mul(&y).unwrap();
        for chi in field.characters() {
            let lhs = char_eval(&xy, &chi).unwrap();
            let rhs = char_eval(&x, &chi).unwrap().mul(&char_eval(&y, &chi).unwrap());
            prop_assert!(lhs.sub(&rhs).is_zero());
        }
    }

    #[test]
    fn twisted_elements_factor(field in field_strategy(), k in 1i64..15, sign in prop::bool::ANY) {
        let f = field.conductor() as i64;
        let mut c = 2 * k + 1;
        while gcd(c as u64, f as u64) != 1 {
            c += 2;
        }
        let c = if sign { -c } else { c };
        let t = twisted_stickelberger(&field, c).unwrap();
        prop_assert!(t.is_integral());
        prop_assert_eq!(t, twist_factor(&field, c).unwrap().mul(&stickelberger(&field).unwrap()).unwrap());
    }

    #[test]
    fn cyclotomic_norm_is_multiplicative(a in prop::collection::vec(-9i64..=9, 1..6), b in prop::collection::vec(-9i64..=9, 1..6)) {
        let x = CyclotomicNumber::from_polynomial(12, a.iter().map(|&v| rat(v, 1)).collect());
        let y = CyclotomicNumber::from_polynomial(12, b.iter().map(|&v| rat(v, 1)).collect());
        prop_assert_eq!(x.mul(&y).norm(), x.norm() * y.norm());
    }

    #[test]
    fn padic_embedding_is_a_ring_map(an in -10_000i64..10_000, ad in 1i64..500, bn in -10_000i64..10_000, bd in 1i64..500) {
        let (x, y) = (rat(an, ad), rat(bn, bd));
        let emb = |r: &Rational| PadicNumber::from_rational(7, r, 10).unwrap();
        prop_assert!(emb(&(&x * &y)).sub(&emb(&x).mul(&emb(&y))).is_zero());
        prop_assert!(emb(&(&x + &y)).sub(&emb(&x).add(&emb(&y))).is_zero());
    }

    #[test]
    fn zmod_inverse(v in 1u64..1_000_000) {
        let ring = AdicRing::new(5, 8).unwrap();
        let x = ring.from_u64(v);
        match x.inv() {
            Some(y) => prop_assert_eq!(x.mul(&y), ring.one()),
            None => prop_assert_eq!(v % 5, 0),
        }
    }

    #[test]
    fn logval_is_a_homomorphism(an in 1i64..100_000, ad in 1i64..100_000, bn in 1i64..100_000, bd in 1i64..100_000, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let (x, y) = (rat(an, ad), rat(bn, bd));
        for place in [Place::Prime(p), Place::Ell] {
            if place == Place::Prime(p) && p == 3 {
                continue;
            }
            let lv = |r: &Rational| logval_rational(r, place, 3, 10).unwrap();
            prop_assert!(lv(&(&x * &y)).sub(&lv(&x).add(&lv(&y))).is_zero());
        }
    }

    #[test]
    fn mirror_is_an_involutive_ring_map((ctx, a, b) in tower_strategy()) {
        let (x, y) = (iw(&ctx, a), iw(&ctx, b));
        prop_assert_eq!(x.mirror().mirror(), x.clone());
        prop_assert_eq!(x.mul(&y).unwrap().mirror(), x.mirror().mul(&y.mirror()).unwrap());
        prop_assert_eq!(x.add(&y).unwrap().mirror(), x.mirror().add(&y.mirror()).unwrap());
        prop_assert_eq!(x.symmetrize().mirror(), x.symmetrize());
    }

    #[test]
    fn tate_twists_compose((ctx, a, b) in tower_strategy(), i in -8i64..=8, j in -8i64..=8) {
        let (x, y) = (iw(&ctx, a), iw(&ctx, b));
        prop_assert_eq!(x.tate_twist(0), x.clone());
        prop_assert_eq!(x.tate_twist(i).tate_twist(j), x.tate_twist(i + j));
        prop_assert_eq!(x.mul(&y).unwrap().tate_twist(i), x.tate_twist(i).mul(&y.tate_twist(i)).unwrap());
        prop_assert_eq!(x.tate_twist(i).mirror(), x.mirror().tate_twist(-i));
    }

    #[test]
    fn level_reduction_is_a_ring_map((ctx, a, b) in tower_strategy()) {
        let (x, y) = (iw(&ctx, a), iw(&ctx, b));
        let lhs = x.mul(&y).unwrap().reduce_mod_level(0).unwrap();
        let rhs = x.reduce_mod_level(0).unwrap().mul(&y.reduce_mod_level(0).unwrap()).unwrap();
        let p = lhs.ring().precision.min(rhs.ring().precision);
        prop_assert_eq!(lhs.coarsen(p), rhs.coarsen(p));
    }
}
