//! Exact and l-adic arithmetic.

pub mod cyclotomic;
pub mod padic;
pub mod unramified;
pub mod zmod;

pub use cyclotomic::{cyclotomic_polynomial, CyclotomicNumber};
pub use padic::{iwasawa_log, teichmuller, PadicNumber};
pub use zmod::{AdicRing, Zl};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Reduce a signed integer into `[0, m)`.
pub fn reduce_mod(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as `(p, e)` pairs in increasing order of `p`.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// l-adic valuation of a nonzero machine integer.
pub fn val_u64(mut n: u64, ell: u64) -> u32 {
    debug_assert!(n != 0);
    let mut v = 0;
    while n.is_multiple_of(ell) {
        n /= ell;
        v += 1;
    }
    v
}

/// l-adic valuation of a nonzero big integer.
pub fn val_big(n: &BigInt, ell: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let ell = BigInt::from(ell);
    let mut n = n.abs();
    let mut v = 0;
    while (&n % &ell).is_zero() {
        n /= &ell;
        v += 1;
    }
    v
}

/// l-adic valuation of a rational, `None` for zero.
pub fn val_rational(x: &Rational, ell: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(val_big(x.numer(), ell) as i64 - val_big(x.denom(), ell) as i64)
}

/// `ell^k` as a machine integer, failing when it does not fit in 63 bits.
pub fn checked_prime_power(ell: u64, k: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..k {
        acc = acc.checked_mul(ell)?;
    }
    if acc > (1u64 << 63) {
        None
    } else {
        Some(acc)
    }
}

pub fn big_pow(ell: u64, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(ell), k as usize)
}

/// A rational with denominator prime to `m`, reduced modulo `m`.
pub fn rational_mod(x: &Rational, m: u64) -> Option<u64> {
    let mb = BigInt::from(m);
    let num = x.numer().mod_floor_big(&mb);
    let den = x.denom().mod_floor_big(&mb);
    let num = u64::try_from(num).ok()?;
    let den = u64::try_from(den).ok()?;
    let inv = inv_mod(den, m)?;
    Some(mul_mod(num, inv, m))
}

trait ModFloorBig {
    fn mod_floor_big(&self, m: &BigInt) -> BigInt;
}

impl ModFloorBig for BigInt {
    fn mod_floor_big(&self, m: &BigInt) -> BigInt {
        let r = self % m;
        if r.is_negative() {
            r + m
        } else {
            r
        }
    }
}

pub(crate) fn big_mod(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor_big(m)
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}
