//! Stickelberger elements, their twists, and the restriction identities.

use num_traits::{One, Zero};

use crate::arith::{factor, gcd, rat, rat_int, reduce_mod, Rational};
use crate::error::{Error, Result};
use crate::field::{AbelianField, RationalElement};

/// sum over 0 < a < f coprime to f of (a/f - 1/2) * artin(a)^{-1}.
pub fn stickelberger(field: &AbelianField) -> Result<RationalElement> {
    let f = field.conductor();
    if f == 1 {
        return Err(Error::TrivialField);
    }
    let mut out = RationalElement::rational_zero(field);
    let half = rat(1, 2);
    for a in 1..f {
        if gcd(a, f) != 1 {
            continue;
        }
        let coeff = rat(a as i64, f as i64) - &half;
        out.add_term(field.inv_rep(field.canonical(a)), coeff);
    }
    Ok(out)
}

/// The factor s' with s_F = sign * (1 - conj) * s', together with the sign found.
#[derive(Debug, Clone, PartialEq)]
pub struct ImaginaryFactor {
    pub element: RationalElement,
    pub sign: i32,
}

/// sum over 0 < a < f/2 coprime to f of (1/2 - a/f) * artin(a)^{-1}, with the
/// sign relating (1 - conj) times it to the Stickelberger element certified.
pub fn imaginary_factor(field: &AbelianField) -> Result<ImaginaryFactor> {
    if !field.is_imaginary() {
        return Err(Error::RealField);
    }
    let f = field.conductor();
    let mut element = RationalElement::rational_zero(field);
    let half = rat(1, 2);
    for a in 1..f {
        if 2 * a >= f || gcd(a, f) != 1 {
            continue;
        }
        element.add_term(
            field.inv_rep(field.canonical(a)),
            &half - rat(a as i64, f as i64),
        );
    }
    let sigma = stickelberger(field)?;
    let product = one_minus_conj(field).mul(&element)?;
    let sign = if product == sigma {
        1
    } else if product == sigma.neg() {
        -1
    } else {
        return Err(Error::Invalid(
            "imaginary factor matches the Stickelberger element under neither sign".into(),
        ));
    };
    Ok(ImaginaryFactor { element, sign })
}

fn one_minus_conj(field: &AbelianField) -> RationalElement {
    let mut x = RationalElement::rational_one(field);
    x.add_term(field.conjugation().rep(), rat_int(-1));
    x
}

/// 1 + conj.
pub fn one_plus_conj(field: &AbelianField) -> RationalElement {
    let mut x = RationalElement::rational_one(field);
    x.add_term(field.conjugation().rep(), rat_int(1));
    x
}

/// Twists must be odd and prime to the conductor.
pub fn check_twist(f: u64, c: i64) -> Result<()> {
    if c % 2 == 0 || gcd(reduce_mod(c, f.max(1)), f) != 1 {
        return Err(Error::InvalidTwist(c));
    }
    Ok(())
}

/// 1 - c * artin(c)^{-1}.
pub fn twist_factor(field: &AbelianField, c: i64) -> Result<RationalElement> {
    check_twist(field.conductor(), c)?;
    let g = field.artin(c)?.inverse();
    let mut out = RationalElement::rational_one(field);
    out.add_term(g.rep(), rat_int(-c));
    Ok(out)
}

/// (1 - c * artin(c)^{-1}) times the Stickelberger element; integrality is verified.
pub fn twisted_stickelberger(field: &AbelianField, c: i64) -> Result<RationalElement> {
    let out = twist_factor(field, c)?.mul(&stickelberger(field)?)?;
    if let Some((_, bad)) = out.terms().find(|(_, x)| !x.denom().is_one()) {
        return Err(Error::NotIntegral(bad.to_string()));
    }
    Ok(out)
}

/// Coefficients of the twisted element of Q(zeta_f) from the closed form
/// (c - 1)/2 - floor(c * a_b / f), a_b = b / c mod f; returns the coefficient
/// at artin(b)^{-1} for every unit b in increasing order.
pub fn cyclotomic_twisted_coefficients(f: u64, c: i64) -> Result<Vec<(u64, i64)>> {
    check_twist(f, c)?;
    if f == 1 {
        return Err(Error::TrivialField);
    }
    let cinv = crate::arith::inv_mod(reduce_mod(c, f), f).unwrap();
    let base = (c - 1) / 2;
    Ok((1..f)
        .filter(|&b| gcd(b, f) == 1)
        .map(|b| {
            let ab = crate::arith::mul_mod(b, cinv, f) as i128;
            let q = (c as i128 * ab).div_euclid(f as i128) as i64;
            (b, base - q)
        })
        .collect())
}

/// The same element as `twisted_stickelberger`, through the integer closed form.
pub fn twisted_stickelberger_integral(field: &AbelianField, c: i64) -> Result<RationalElement> {
    let coeffs = cyclotomic_twisted_coefficients(field.conductor(), c)?;
    let mut out = RationalElement::rational_zero(field);
    for (b, v) in coeffs {
        out.add_term(field.inv_rep(field.canonical(b)), rat_int(v));
    }
    Ok(out)
}

/// The Stickelberger element, twisted when c is given.
pub fn stickelberger_maybe_twisted(
    field: &AbelianField,
    c: Option<i64>,
) -> Result<RationalElement> {
    match c {
        Some(c) => twisted_stickelberger(field, c),
        None => stickelberger(field),
    }
}

/// Both sides of N_{F/K}(s_F) = prod_{p | f_F, p !| f_K} (1 - artin_K(p)^{-1}) s_K.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictionReport {
    pub big: AbelianField,
    pub small: AbelianField,
    pub twist: Option<i64>,
    pub euler_primes: Vec<u64>,
    pub left: RationalElement,
    pub right: RationalElement,
    pub holds: bool,
}

pub fn check_restriction(
    big: &AbelianField,
    small: &AbelianField,
    c: Option<i64>,
) -> Result<RestrictionReport> {
    if small.is_rationals() {
        return Err(Error::TrivialField);
    }
    if !big.contains(small) {
        return Err(Error::NotSubfield {
            f: big.conductor(),
            sub_f: small.conductor(),
        });
    }
    if let Some(c) = c {
        check_twist(big.conductor(), c)?;
    }
    let left = stickelberger_maybe_twisted(big, c)?.restrict(small)?;
    let fk = small.conductor();
    let euler_primes: Vec<u64> = factor(big.conductor())
        .into_iter()
        .map(|(p, _)| p)
        .filter(|p| !fk.is_multiple_of(*p))
        .collect();
    let mut right = stickelberger_maybe_twisted(small, c)?;
    for &p in &euler_primes {
        let mut factor_p = RationalElement::rational_one(small);
        factor_p.add_term(small.artin(p as i64)?.inverse().rep(), rat_int(-1));
        right = factor_p.mul(&right)?;
    }
    let holds = left == right;
    Ok(RestrictionReport {
        big: big.clone(),
        small: small.clone(),
        twist: c,
        euler_primes,
        left,
        right,
        holds,
    })
}

/// N_{F/K}(s_F) for K the decomposition field of a ramified prime p.
#[derive(Debug, Clone, PartialEq)]
pub struct RamifiedReport {
    pub prime: u64,
    pub decomposition_field: AbelianField,
    pub vacuous: bool,
    pub norm: RationalElement,
    pub holds: bool,
}

pub fn ramified_annihilation_check(field: &AbelianField, p: u64) -> Result<RamifiedReport> {
    if p < 2 || !field.conductor().is_multiple_of(p) || !crate::arith::is_prime(p) {
        return Err(Error::PrimeNotInConductor(p));
    }
    let k = field.decomposition_field(p);
    let norm = stickelberger(field)?.restrict(&k)?;
    let vacuous = k.is_rationals();
    let holds = vacuous || norm.is_zero();
    Ok(RamifiedReport {
        prime: p,
        decomposition_field: k,
        vacuous,
        norm,
        holds,
    })
}

/// (1 + conj) * x = 0.
pub fn is_killed_by_plus(x: &RationalElement) -> bool {
    one_plus_conj(x.field())
        .mul(x)
        .map(|y| y.is_zero())
        .unwrap_or(false)
}

/// Image of an element under the trivial character.
pub fn augmentation(x: &RationalElement) -> Rational {
    x.terms().fold(Rational::zero(), |acc, (_, c)| acc + c)
}
