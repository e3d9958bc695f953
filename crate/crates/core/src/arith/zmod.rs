use std::fmt;

use serde::{Deserialize, Serialize};

use super::{checked_prime_power, inv_mod, mul_mod, rational_mod, reduce_mod, Rational};
use crate::error::{Error, Result};

/// The ring Z/l^k, standing in for Z_l known modulo l^k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AdicRing {
    pub prime: u64,
    pub precision: u32,
    modulus: u64,
}

impl AdicRing {
    pub fn new(prime: u64, precision: u32) -> Result<Self> {
        if prime < 3 || !super::is_prime(prime) {
            return Err(Error::NotOddPrime(prime));
        }
        let modulus = checked_prime_power(prime, precision).ok_or(Error::ModulusTooLarge {
            ell: prime,
            prec: precision,
        })?;
        Ok(AdicRing {
            prime,
            precision,
            modulus,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn zero(&self) -> Zl {
        Zl {
            value: 0,
            modulus: self.modulus,
        }
    }

    pub fn one(&self) -> Zl {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Zl {
        Zl {
            value: reduce_mod(v, self.modulus),
            modulus: self.modulus,
        }
    }

    pub fn from_u64(&self, v: u64) -> Zl {
        Zl {
            value: v % self.modulus,
            modulus: self.modulus,
        }
    }

    pub fn from_rational(&self, x: &Rational) -> Result<Zl> {
        let value = rational_mod(x, self.modulus).ok_or(Error::DenominatorNotUnit(self.prime))?;
        Ok(Zl {
            value,
            modulus: self.modulus,
        })
    }

    /// Drop to a coarser precision.
    pub fn coarsen(&self, precision: u32) -> AdicRing {
        let precision = precision.min(self.precision);
        AdicRing {
            prime: self.prime,
            precision,
            modulus: checked_prime_power(self.prime, precision).unwrap(),
        }
    }

    /// l-adic valuation of a residue, capped at the precision.
    pub fn valuation(&self, x: Zl) -> u32 {
        if x.value == 0 {
            return self.precision;
        }
        super::val_u64(x.value, self.prime)
    }

    /// Teichmüller representative of `a mod l`, modulo l^precision.
    pub fn teichmuller(&self, a: u64) -> Zl {
        let mut w = a % self.prime;
        if w == 0 {
            return self.zero();
        }
        for _ in 0..self.precision {
            w = super::pow_mod(w, self.prime, self.modulus);
        }
        self.from_u64(w)
    }
}

/// A residue modulo l^k.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Zl {
    value: u64,
    modulus: u64,
}

impl Zl {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Centered representative in `(-m/2, m/2]`.
    pub fn signed(&self) -> i128 {
        let v = self.value as i128;
        if v > self.modulus as i128 / 2 {
            v - self.modulus as i128
        } else {
            v
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn add(&self, o: &Zl) -> Zl {
        debug_assert_eq!(self.modulus, o.modulus);
        let s = self.value as u128 + o.value as u128;
        Zl {
            value: (s % self.modulus as u128) as u64,
            modulus: self.modulus,
        }
    }

    pub fn sub(&self, o: &Zl) -> Zl {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Zl {
        Zl {
            value: if self.value == 0 {
                0
            } else {
                self.modulus - self.value
            },
            modulus: self.modulus,
        }
    }

    pub fn mul(&self, o: &Zl) -> Zl {
        debug_assert_eq!(self.modulus, o.modulus);
        Zl {
            value: mul_mod(self.value, o.value, self.modulus),
            modulus: self.modulus,
        }
    }

    pub fn pow(&self, e: u64) -> Zl {
        Zl {
            value: super::pow_mod(self.value, e, self.modulus),
            modulus: self.modulus,
        }
    }

    pub fn inv(&self) -> Option<Zl> {
        inv_mod(self.value, self.modulus).map(|value| Zl {
            value,
            modulus: self.modulus,
        })
    }

    /// Same residue read modulo a divisor of the current modulus.
    pub fn reduce_to(&self, modulus: u64) -> Zl {
        debug_assert_eq!(self.modulus % modulus, 0);
        Zl {
            value: self.value % modulus,
            modulus,
        }
    }
}

impl fmt::Debug for Zl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for Zl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.signed())
    }
}
