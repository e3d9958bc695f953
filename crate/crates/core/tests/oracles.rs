//! Values recomputed by hand or taken from standard tables.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use stickel_core::arith::{gcd, iwasawa_log, rat, rat_int, teichmuller, PadicNumber, Rational};
use stickel_core::bernoulli::{
    gen_bernoulli_b1, irregular_indices, minus_class_number, ordinary_bernoulli,
};
use stickel_core::field::{AbelianField, RationalElement};
use stickel_core::logval::{local_norm, LocalCyclotomicField};
use stickel_core::stickelberger::{check_restriction, stickelberger, twisted_stickelberger};

fn padic(ell: u64, x: &Rational, m: u32) -> PadicNumber {
    PadicNumber::from_rational(ell, x, m).unwrap()
}

/// -sum (1/2 - a/f) [a^{-1}] over a in (Z/f)^x, written out with plain rationals.
fn stickelberger_by_definition(f: u64) -> Vec<(u64, Rational)> {
    let units: Vec<u64> = (1..f).filter(|&a| gcd(a, f) == 1).collect();
    let inverse = |a: u64| units.iter().copied().find(|&b| (a * b) % f == 1).unwrap();
    let mut out: Vec<(u64, Rational)> = units
        .iter()
        .map(|&a| (inverse(a), -(rat(1, 2) - rat(a as i64, f as i64))))
        .collect();
    out.sort();
    out
}

#[test]
fn stickelberger_matches_definition() {
    for f in [3u64, 4, 5, 7, 8, 9, 11, 12, 13, 15, 16, 20, 21, 24] {
        let field = AbelianField::cyclotomic(f);
        let s = stickelberger(&field).unwrap();
        for (b, c) in stickelberger_by_definition(f) {
            assert_eq!(s.coeff_rep(b), c, "f={} b={}", f, b);
        }
    }
    let s3 = stickelberger(&AbelianField::cyclotomic(3)).unwrap();
    assert_eq!(s3.coeff_rep(1), rat(-1, 6));
    assert_eq!(s3.coeff_rep(2), rat(1, 6));
}

#[test]
fn twisted_values() {
    // c = -1: the twist factor is 1 + conj, which kills s_3
    let q3 = AbelianField::cyclotomic(3);
    assert!(twisted_stickelberger(&q3, -1).unwrap().is_zero());
    // c = 5 acts as [2]: (1 - 5[2])(-1/6 + 1/6 [2]) = -1 + [2]
    let t = twisted_stickelberger(&q3, 5).unwrap();
    assert_eq!(t.coeff_rep(1), rat_int(-1));
    assert_eq!(t.coeff_rep(2), rat_int(1));
}

#[test]
fn restriction_of_q15() {
    // N(s_15) on Q(zeta_3) = (1 - [5]^{-1}) s_3 = (1 - [2])(-1/6 + 1/6 [2]) = -1/3 + 1/3 [2]
    let q3 = AbelianField::cyclotomic(3);
    let r = check_restriction(&AbelianField::cyclotomic(15), &q3, None).unwrap();
    let expected = RationalElement::from_terms(&q3, &(), [(1, rat(-1, 3)), (2, rat(1, 3))]);
    assert!(r.holds);
    assert_eq!(r.left, expected);
}

#[test]
fn bernoulli_numbers() {
    assert_eq!(ordinary_bernoulli(0), rat_int(1));
    assert_eq!(ordinary_bernoulli(1), rat(-1, 2));
    assert_eq!(ordinary_bernoulli(2), rat(1, 6));
    assert_eq!(ordinary_bernoulli(3), Rational::zero());
    assert_eq!(ordinary_bernoulli(12), rat(-691, 2730));
    assert_eq!(ordinary_bernoulli(20), rat(-174611, 330));
    assert!((ordinary_bernoulli(32).numer() % BigInt::from(37)).is_zero());
}

#[test]
fn generalized_b1() {
    // B_{1,chi} = (1/f) sum a chi(a): -1/3 for the character mod 3, -1/2 mod 4, -3 mod 23 (h(-23) = 3)
    for (f, value) in [(3u64, rat(-1, 3)), (4, rat(-1, 2)), (23, rat_int(-3))] {
        let field = AbelianField::new(f, &if f == 23 { vec![2] } else { vec![] }).unwrap();
        let chi = field.characters().into_iter().find(|c| c.is_odd()).unwrap();
        assert_eq!(
            gen_bernoulli_b1(&chi).unwrap().as_rational(),
            Some(value),
            "f={}",
            f
        );
    }
}

#[test]
fn class_numbers() {
    for (p, h) in [(23u64, 3u64), (31, 9), (37, 37), (71, 3882809)] {
        assert_eq!(minus_class_number(p).unwrap(), BigInt::from(h), "p={}", p);
    }
    assert_eq!(irregular_indices(37).unwrap(), vec![32]);
    assert_eq!(irregular_indices(101).unwrap(), vec![68]);
    assert_eq!(irregular_indices(103).unwrap(), vec![24]);
    assert!(irregular_indices(97).unwrap().is_empty());
}

#[test]
fn teichmuller_lifts() {
    // 57^2 = -1 mod 125 and 57 = 2 mod 5
    let w = teichmuller(&padic(5, &rat_int(2), 3), 3).unwrap();
    assert!(w.sub(&padic(5, &rat_int(57), 3)).is_zero());
    let w = teichmuller(&padic(7, &rat_int(3), 6), 6).unwrap();
    assert!(w.pow(6).unwrap().sub(&padic(7, &rat_int(1), 6)).is_zero());
}

#[test]
fn logarithms() {
    // log(1 + 3) = sum (-1)^{n+1} 3^n / n, truncated where the terms pass 3^12
    let mut series = Rational::zero();
    let mut power = Rational::one();
    for n in 1..40i64 {
        power *= rat_int(3);
        let term = &power / rat_int(n);
        series += if n % 2 == 1 { term } else { -term };
    }
    let log4 = iwasawa_log(&padic(3, &rat_int(4), 12), 12).unwrap();
    assert!(log4.sub(&padic(3, &series, 12)).truncate(12).is_zero());
    // Log(l) = 0 and Log(-1) = 0
    assert!(iwasawa_log(&padic(3, &rat_int(3), 10), 10)
        .unwrap()
        .is_zero());
    assert!(iwasawa_log(&padic(5, &rat_int(-1), 10), 10)
        .unwrap()
        .is_zero());
}

#[test]
fn local_norms() {
    for (ell, level) in [(3u64, 1u32), (3, 2), (5, 1), (7, 1)] {
        let k = LocalCyclotomicField::new(ell, level, 10).unwrap();
        let n = local_norm(&k.one_minus_zeta().unwrap()).unwrap();
        assert!(
            n.sub(&padic(ell, &rat_int(ell as i64), 10))
                .truncate(8)
                .is_zero(),
            "l={} level={}",
            ell,
            level
        );
    }
}
