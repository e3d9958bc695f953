//! l-adic numbers at explicit precision.
//!
//! A nonzero value is stored as `l^v * u` with `u` a unit known modulo
//! `l^M` (relative precision `M`). A zero is either exact or known only
//! modulo some `l^k`; the latter is what cancellation produces.
//!
//! Precision propagates the usual way:
//!
//! ```text
//! (l^a x + O(l^i)) + (l^b y + O(l^j)) is known modulo l^min(i, j)
//! (l^a x + O(l^(a+i))) (l^b y + O(l^(b+j))) = l^(a+b) x y + O(l^(a+b+min(i, j)))
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{big_mod, big_pow, val_big, Rational};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// `absolute = None` is the exact zero, otherwise zero modulo `l^absolute`.
    Zero { absolute: Option<i64> },
    Nonzero {
        valuation: i64,
        unit: BigInt,
        precision: u32,
    },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PadicNumber {
    prime: u64,
    repr: Repr,
}

fn check_prime(prime: u64) -> Result<()> {
    if prime < 3 || !super::is_prime(prime) {
        return Err(Error::NotOddPrime(prime));
    }
    Ok(())
}

impl PadicNumber {
    pub fn exact_zero(prime: u64) -> Self {
        PadicNumber {
            prime,
            repr: Repr::Zero { absolute: None },
        }
    }

    /// Zero known modulo `l^absolute`.
    pub fn zero_mod(prime: u64, absolute: i64) -> Self {
        PadicNumber {
            prime,
            repr: Repr::Zero {
                absolute: Some(absolute),
            },
        }
    }

    /// An integer carried at relative precision `precision`.
    pub fn from_bigint(prime: u64, n: &BigInt, precision: u32) -> Result<Self> {
        check_prime(prime)?;
        if n.is_zero() {
            return Ok(Self::exact_zero(prime));
        }
        let v = val_big(n, prime);
        let unit = n / big_pow(prime, v);
        Ok(Self::from_parts(prime, v as i64, &unit, precision))
    }

    pub fn from_i64(prime: u64, n: i64, precision: u32) -> Result<Self> {
        Self::from_bigint(prime, &BigInt::from(n), precision)
    }

    pub fn from_rational(prime: u64, x: &Rational, precision: u32) -> Result<Self> {
        check_prime(prime)?;
        if x.is_zero() {
            return Ok(Self::exact_zero(prime));
        }
        let vn = val_big(x.numer(), prime);
        let vd = val_big(x.denom(), prime);
        let num = x.numer() / big_pow(prime, vn);
        let den = x.denom() / big_pow(prime, vd);
        let m = big_pow(prime, precision);
        let inv = mod_inverse(&den, &m).expect("denominator unit after stripping l");
        let unit = big_mod(&(num * inv), &m);
        Ok(Self::from_parts(
            prime,
            vn as i64 - vd as i64,
            &unit,
            precision,
        ))
    }

    /// A residue `r` modulo `l^absolute` (absolute precision, not relative).
    pub fn from_residue(prime: u64, r: &BigInt, absolute: i64) -> Self {
        if absolute <= 0 {
            return Self::zero_mod(prime, absolute);
        }
        let m = big_pow(prime, absolute as u32);
        let r = big_mod(r, &m);
        if r.is_zero() {
            return Self::zero_mod(prime, absolute);
        }
        let v = val_big(&r, prime) as i64;
        let unit = &r / big_pow(prime, v as u32);
        Self::from_parts(prime, v, &unit, (absolute - v) as u32)
    }

    /// l^valuation * unit with the unit known modulo l^precision.
    pub fn from_unit(prime: u64, valuation: i64, unit: &BigInt, precision: u32) -> Result<Self> {
        check_prime(prime)?;
        if precision == 0 || (unit % BigInt::from(prime)).is_zero() {
            return Err(Error::Invalid(
                "unit part must be prime to l at positive precision".into(),
            ));
        }
        Ok(Self::from_parts(prime, valuation, unit, precision))
    }

    fn from_parts(prime: u64, valuation: i64, unit: &BigInt, precision: u32) -> Self {
        if precision == 0 {
            return Self::zero_mod(prime, valuation);
        }
        let m = big_pow(prime, precision);
        PadicNumber {
            prime,
            repr: Repr::Nonzero {
                valuation,
                unit: big_mod(unit, &m),
                precision,
            },
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// `None` for zero (exact or to precision).
    pub fn valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Nonzero { valuation, .. } => Some(*valuation),
        }
    }

    /// Relative precision of a nonzero value.
    pub fn precision(&self) -> Option<u32> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Nonzero { precision, .. } => Some(*precision),
        }
    }

    /// The value is known modulo `l^absolute_precision`; `None` means exact zero.
    pub fn absolute_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero { absolute } => *absolute,
            Repr::Nonzero {
                valuation,
                precision,
                ..
            } => Some(valuation + *precision as i64),
        }
    }

    pub fn unit(&self) -> BigInt {
        match &self.repr {
            Repr::Zero { .. } => BigInt::zero(),
            Repr::Nonzero { unit, .. } => unit.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { absolute: None })
    }

    /// Representative integer modulo `l^k` of an integral value.
    pub fn residue(&self, k: u32) -> Result<BigInt> {
        match &self.repr {
            Repr::Zero { .. } => Ok(BigInt::zero()),
            Repr::Nonzero {
                valuation, unit, ..
            } => {
                if *valuation < 0 {
                    return Err(Error::Invalid("value is not l-integral".into()));
                }
                let m = big_pow(self.prime, k);
                Ok(big_mod(
                    &(unit * big_pow(self.prime, *valuation as u32)),
                    &m,
                ))
            }
        }
    }

    /// Drop digits beyond absolute precision `absolute`.
    pub fn truncate(&self, absolute: i64) -> Self {
        match &self.repr {
            Repr::Zero { absolute: a } => {
                let a = a.map_or(absolute, |a| a.min(absolute));
                Self::zero_mod(self.prime, a)
            }
            Repr::Nonzero {
                valuation,
                unit,
                precision,
            } => {
                let abs = (valuation + *precision as i64).min(absolute);
                if abs <= *valuation {
                    return Self::zero_mod(self.prime, abs);
                }
                Self::from_parts(self.prime, *valuation, unit, (abs - valuation) as u32)
            }
        }
    }

    /// Equal modulo the smaller of the two absolute precisions.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let d = self.sub(other);
        d.is_zero()
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Nonzero {
                valuation,
                unit,
                precision,
            } => Self::from_parts(self.prime, *valuation, &(-unit), *precision),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.prime, other.prime, "mixing primes");
        if self.is_exact_zero() {
            return other.clone();
        }
        if other.is_exact_zero() {
            return self.clone();
        }
        let abs = self
            .absolute_precision()
            .unwrap()
            .min(other.absolute_precision().unwrap());
        let (va, ua) = self.scaled_parts();
        let (vb, ub) = other.scaled_parts();
        let v0 = va.min(vb).min(abs);
        let lift = |v: i64, u: &BigInt| -> BigInt {
            if v == i64::MAX {
                BigInt::zero()
            } else {
                u * big_pow(self.prime, (v - v0) as u32)
            }
        };
        let s = lift(va, &ua) + lift(vb, &ub);
        if abs <= v0 {
            return Self::zero_mod(self.prime, abs);
        }
        let m = big_pow(self.prime, (abs - v0) as u32);
        let s = big_mod(&s, &m);
        if s.is_zero() {
            return Self::zero_mod(self.prime, abs);
        }
        let vs = val_big(&s, self.prime) as i64;
        let unit = s / big_pow(self.prime, vs as u32);
        Self::from_parts(self.prime, v0 + vs, &unit, (abs - v0 - vs) as u32)
    }

    // zeros are reported with valuation i64::MAX
    fn scaled_parts(&self) -> (i64, BigInt) {
        match &self.repr {
            Repr::Zero { .. } => (i64::MAX, BigInt::zero()),
            Repr::Nonzero {
                valuation, unit, ..
            } => (*valuation, unit.clone()),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.prime, other.prime, "mixing primes");
        match (&self.repr, &other.repr) {
            (Repr::Zero { absolute: None }, _) | (_, Repr::Zero { absolute: None }) => {
                Self::exact_zero(self.prime)
            }
            (Repr::Zero { absolute: Some(a) }, Repr::Zero { absolute: Some(b) }) => {
                Self::zero_mod(self.prime, a + b)
            }
            (Repr::Zero { absolute: Some(a) }, Repr::Nonzero { valuation, .. })
            | (Repr::Nonzero { valuation, .. }, Repr::Zero { absolute: Some(a) }) => {
                Self::zero_mod(self.prime, a + valuation)
            }
            (
                Repr::Nonzero {
                    valuation: va,
                    unit: ua,
                    precision: pa,
                },
                Repr::Nonzero {
                    valuation: vb,
                    unit: ub,
                    precision: pb,
                },
            ) => Self::from_parts(self.prime, va + vb, &(ua * ub), (*pa).min(*pb)),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        match &self.repr {
            Repr::Zero { .. } => Err(Error::ZeroInput),
            Repr::Nonzero {
                valuation,
                unit,
                precision,
            } => {
                let m = big_pow(self.prime, *precision);
                let inv = mod_inverse(unit, &m).expect("unit");
                Ok(Self::from_parts(self.prime, -valuation, &inv, *precision))
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = match &base.repr {
            Repr::Nonzero { precision, .. } => {
                Self::from_parts(self.prime, 0, &BigInt::one(), *precision)
            }
            Repr::Zero { .. } if e == 0 => Self::from_i64(self.prime, 1, 1)?,
            Repr::Zero { .. } => Self::exact_zero(self.prime),
        };
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        Ok(acc)
    }
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(big_mod(&g.x, m))
}

/// Teichmüller representative of a unit, modulo `l^M` (capped by the input precision).
pub fn teichmuller(u: &PadicNumber, m: u32) -> Result<PadicNumber> {
    match u.valuation() {
        None => return Err(Error::ZeroInput),
        Some(0) => {}
        Some(v) => return Err(Error::NotAUnit(v)),
    }
    let prec = m.min(u.precision().unwrap());
    let modulus = big_pow(u.prime, prec);
    let ell = BigInt::from(u.prime);
    let mut w = big_mod(&u.unit(), &modulus);
    for _ in 0..prec {
        w = w.modpow(&ell, &modulus);
    }
    Ok(PadicNumber::from_parts(u.prime, 0, &w, prec))
}

/// Iwasawa logarithm, with `Log(l) = 0` and `Log(root of unity) = 0`, correct modulo `l^M`.
pub fn iwasawa_log(x: &PadicNumber, m: u32) -> Result<PadicNumber> {
    let prime = x.prime;
    let (prec, unit) = match &x.repr {
        Repr::Zero { .. } => return Err(Error::ZeroInput),
        Repr::Nonzero {
            unit, precision, ..
        } => (*precision, unit.clone()),
    };
    let target = m.min(prec);
    let u = PadicNumber::from_parts(prime, 0, &unit, prec);
    let w = teichmuller(&u, prec)?;
    let principal = u.div(&w)?;
    // y = <u> - 1, known modulo l^target
    let y = principal.residue(target)? - BigInt::one();
    let y = big_mod(&y, &big_pow(prime, target));
    if y.is_zero() {
        return Ok(PadicNumber::zero_mod(prime, target as i64));
    }
    let t = val_big(&y, prime) as i64;
    // last index with k*t - v_l(k) < target
    let mut last = 1u64;
    let mut k = 1u64;
    loop {
        let need = k as i64 * t - floor_log(k, prime) as i64;
        if need >= target as i64 {
            break;
        }
        last = k;
        k += 1;
    }
    let extra = floor_log(last, prime) + 1;
    let work = big_pow(prime, target + extra);
    let mut sum = BigInt::zero();
    let mut ypow = BigInt::one();
    for k in 1..=last {
        ypow = big_mod(&(&ypow * &y), &work);
        let mut kk = k;
        let mut a = 0u32;
        while kk % prime == 0 {
            kk /= prime;
            a += 1;
        }
        let divided = &ypow / big_pow(prime, a);
        debug_assert!((&ypow % big_pow(prime, a)).is_zero());
        let inv = mod_inverse(&BigInt::from(kk), &work).unwrap();
        let term = divided * inv;
        if k % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(PadicNumber::from_residue(prime, &sum, target as i64))
}

fn floor_log(k: u64, ell: u64) -> u32 {
    let mut k = k;
    let mut r = 0;
    while k >= ell {
        k /= ell;
        r += 1;
    }
    r
}

impl fmt::Debug for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero { absolute: None } => write!(f, "0"),
            Repr::Zero { absolute: Some(a) } => write!(f, "O({}^{})", self.prime, a),
            Repr::Nonzero {
                valuation,
                unit,
                precision,
            } => write!(
                f,
                "{}^{} * {} + O({}^{})",
                self.prime,
                valuation,
                unit,
                self.prime,
                valuation + *precision as i64
            ),
        }
    }
}

impl PadicNumber {
    /// Integer value when the number is an integral residue small enough for i64.
    pub fn to_i64_mod(&self, k: u32) -> Option<i64> {
        self.residue(k).ok()?.to_i64()
    }

    /// Whether the value is an l-adic integer (nonnegative valuation or zero).
    pub fn is_integral(&self) -> bool {
        self.valuation().is_none_or(|v| v >= 0)
    }

    pub fn abs_unit(&self) -> BigInt {
        self.unit().abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn p(prime: u64, n: i64, m: u32) -> PadicNumber {
        PadicNumber::from_i64(prime, n, m).unwrap()
    }

    #[test]
    fn arithmetic_tracks_precision() {
        let a = p(5, 10, 4); // 5 * 2, known mod 5^5
        let b = p(5, 3, 6); // known mod 5^6
        let s = a.add(&b);
        assert_eq!(s.valuation(), Some(0));
        assert_eq!(s.absolute_precision(), Some(5));
        assert_eq!(s.residue(5).unwrap(), BigInt::from(13));
        let prod = a.mul(&b);
        assert_eq!(prod.valuation(), Some(1));
        assert_eq!(prod.precision(), Some(4));
        let c = p(5, 7, 3);
        let z = c.sub(&c);
        assert!(z.is_zero() && !z.is_exact_zero());
        assert_eq!(z.absolute_precision(), Some(3));
    }

    #[test]
    fn rational_round_trip() {
        let x = PadicNumber::from_rational(3, &rat(5, 18), 6).unwrap();
        assert_eq!(x.valuation(), Some(-2));
        let y = x.mul(&p(3, 18, 8));
        assert!(y.agrees_with(&p(3, 5, 8)));
    }

    #[test]
    fn log_of_one_and_ell() {
        assert!(iwasawa_log(&p(3, 1, 8), 8).unwrap().is_zero());
        assert!(iwasawa_log(&p(3, 3, 8), 8).unwrap().is_zero());
        assert!(iwasawa_log(&p(5, -1, 8), 8).unwrap().is_zero());
        assert_eq!(iwasawa_log(&p(3, 0, 8), 8), Err(Error::ZeroInput));
    }

    #[test]
    fn teichmuller_small_cases() {
        let one = teichmuller(&p(5, 1, 6), 6).unwrap();
        assert!(one.agrees_with(&p(5, 1, 6)));
        let minus = teichmuller(&p(5, -1, 6), 6).unwrap();
        assert!(minus.agrees_with(&p(5, -1, 6)));
        assert!(matches!(
            teichmuller(&p(5, 10, 6), 6),
            Err(Error::NotAUnit(1))
        ));
    }
}
