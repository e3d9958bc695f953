use std::fmt;

use super::{crt, AbelianField, GaloisElement};
use crate::arith::{factor, gcd, lcm, reduce_mod, CyclotomicNumber};
use crate::error::{Error, Result};

/// Fixed generators of (Z/fZ)^x with discrete logarithms, and the exponent
/// vectors of the characters trivial on H.
pub struct CharacterGroup {
    f: u64,
    gens: Vec<u64>,
    orders: Vec<u64>,
    dlog: Vec<u32>,
    members: Vec<Vec<u64>>,
}

fn primitive_root_prime_power(p: u64, k: u32) -> u64 {
    let phi_p = p - 1;
    let primes: Vec<u64> = factor(phi_p).into_iter().map(|(q, _)| q).collect();
    let g = (2..p.max(3))
        .find(|&g| {
            primes
                .iter()
                .all(|&q| crate::arith::pow_mod(g, phi_p / q, p) != 1)
        })
        .unwrap_or(1);
    if k >= 2 && crate::arith::pow_mod(g, phi_p, p * p) == 1 {
        g + p
    } else {
        g
    }
}

impl CharacterGroup {
    pub(super) fn new(field: AbelianField) -> Self {
        let f = field.conductor();
        let mut gens = Vec::new();
        let mut orders = Vec::new();
        for (p, k) in factor(f) {
            let pk = p.pow(k);
            let rest = f / pk;
            if p == 2 {
                if k >= 2 {
                    gens.push(crt(pk - 1, pk, 1 % rest, rest));
                    orders.push(2);
                }
                if k >= 3 {
                    gens.push(crt(5, pk, 1 % rest, rest));
                    orders.push(pk / 4);
                }
            } else {
                gens.push(crt(primitive_root_prime_power(p, k), pk, 1 % rest, rest));
                orders.push(pk / p * (p - 1));
            }
        }
        let ng = gens.len();
        let mut dlog = vec![0u32; f as usize * ng.max(1)];
        // walk all exponent vectors
        let mut exps = vec![0u64; ng];
        let mut val = 1 % f;
        loop {
            for (i, &e) in exps.iter().enumerate() {
                dlog[val as usize * ng + i] = e as u32;
            }
            let mut i = 0;
            loop {
                if i == ng {
                    break;
                }
                exps[i] += 1;
                val = crate::arith::mul_mod(val, gens[i], f);
                if exps[i] < orders[i] {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
            if i == ng {
                break;
            }
        }
        let mut group = CharacterGroup {
            f,
            gens,
            orders,
            dlog,
            members: Vec::new(),
        };
        let hgens = field.kernel_generators();
        let mut members = Vec::new();
        let mut a = vec![0u64; ng];
        loop {
            if hgens.iter().all(|&h| group.eval_exponent(&a, h) == 0) {
                members.push(a.clone());
            }
            let mut i = 0;
            while i < ng {
                a[i] += 1;
                if a[i] < group.orders[i] {
                    break;
                }
                a[i] = 0;
                i += 1;
            }
            if i == ng {
                break;
            }
        }
        group.members = members;
        group
    }

    pub fn generators(&self) -> &[u64] {
        &self.gens
    }

    pub fn generator_orders(&self) -> &[u64] {
        &self.orders
    }

    /// Exponent of (Z/fZ)^x.
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &n| lcm(acc, n))
    }

    /// Exponent vector of a unit residue on the fixed generators.
    pub fn dlog(&self, residue: u64) -> Vec<u64> {
        let ng = self.gens.len();
        let r = (residue % self.f) as usize;
        (0..ng).map(|i| self.dlog[r * ng + i] as u64).collect()
    }

    // chi(h) as an exponent of zeta_E, E the group exponent
    fn eval_exponent(&self, a: &[u64], residue: u64) -> u64 {
        let e = self.exponent();
        let x = self.dlog(residue);
        a.iter()
            .zip(&x)
            .zip(&self.orders)
            .map(|((&ai, &xi), &ni)| (ai * xi % ni) * (e / ni) % e)
            .sum::<u64>()
            % e
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// A character of (Z/fZ)^x trivial on the kernel of F, with values in mu_e.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DirichletCharacter {
    field: AbelianField,
    exps: Vec<u64>,
    order: u64,
    // chi(gen_i) = zeta_order^values[i]
    values: Vec<u64>,
}

impl AbelianField {
    /// All characters of Gal(F/Q), in a fixed order with the trivial one first.
    pub fn characters(&self) -> Vec<DirichletCharacter> {
        let group = self.character_group();
        group
            .members
            .iter()
            .map(|a| DirichletCharacter::build(self.clone(), a.clone()))
            .collect()
    }
}

impl DirichletCharacter {
    fn build(field: AbelianField, exps: Vec<u64>) -> Self {
        let group = field.character_group();
        let big_e = group.exponent();
        let scaled: Vec<u64> = exps
            .iter()
            .zip(&group.orders)
            .map(|(&a, &n)| a % n * (big_e / n))
            .collect();
        let g = scaled.iter().fold(big_e, |acc, &v| gcd(acc, v));
        let order = big_e / g;
        let values = scaled.iter().map(|&v| v / g).collect();
        DirichletCharacter {
            field,
            exps,
            order,
            values,
        }
    }

    /// The character with the given exponents on the fixed generators.
    pub fn from_exponents(field: &AbelianField, exps: &[u64]) -> Result<Self> {
        let group = field.character_group();
        if exps.len() != group.gens.len() {
            return Err(Error::Invalid("wrong number of generator exponents".into()));
        }
        let exps: Vec<u64> = exps
            .iter()
            .zip(&group.orders)
            .map(|(&a, &n)| a % n)
            .collect();
        if field
            .kernel_generators()
            .iter()
            .any(|&h| group.eval_exponent(&exps, h) != 0)
        {
            return Err(Error::Invalid(
                "character is not trivial on the kernel".into(),
            ));
        }
        Ok(Self::build(field.clone(), exps))
    }

    /// The character sending generator i to zeta_{order}^{values[i]}.
    pub fn from_values(field: &AbelianField, values: &[(u64, u64)]) -> Result<Self> {
        let group = field.character_group();
        if values.len() != group.gens.len() {
            return Err(Error::Invalid("wrong number of generator values".into()));
        }
        let mut exps = Vec::with_capacity(values.len());
        for (&(k, e), &n) in values.iter().zip(&group.orders) {
            // zeta_e^k = zeta_n^a requires (k * n) divisible by e
            if e == 0 || (k % e) * n % e != 0 {
                return Err(Error::Invalid(
                    "value is not a root of unity of the generator order".into(),
                ));
            }
            exps.push((k % e) * n / e);
        }
        Self::from_exponents(field, &exps)
    }

    pub fn field(&self) -> &AbelianField {
        &self.field
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    /// Order e of the character; values lie in mu_e.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Values on the fixed generators as exponents of zeta_order.
    pub fn generator_values(&self) -> &[u64] {
        &self.values
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// chi(a) = zeta_order^k, or None when a is not coprime to f.
    pub fn value_exponent(&self, a: i64) -> Option<u64> {
        let f = self.field.conductor();
        let r = reduce_mod(a, f);
        if gcd(r, f) != 1 {
            return None;
        }
        let x = self.field.character_group().dlog(r);
        Some(
            self.values
                .iter()
                .zip(&x)
                .map(|(&v, &xi)| (v as u128 * xi as u128 % self.order as u128) as u64)
                .sum::<u64>()
                % self.order,
        )
    }

    pub fn value(&self, a: i64) -> Option<CyclotomicNumber> {
        self.value_exponent(a)
            .map(|k| CyclotomicNumber::zeta_power(self.order, k as i64))
    }

    pub fn value_at(&self, g: &GaloisElement) -> CyclotomicNumber {
        self.value(g.rep() as i64)
            .expect("Galois representatives are units")
    }

    pub fn is_odd(&self) -> bool {
        self.field.conductor() > 2
            && self.order.is_multiple_of(2)
            && self.value_exponent(-1) == Some(self.order / 2)
    }

    pub fn conj(&self) -> Self {
        self.pow(-1)
    }

    pub fn pow(&self, j: i64) -> Self {
        let group = self.field.character_group();
        let exps = self
            .exps
            .iter()
            .zip(&group.orders)
            .map(|(&a, &n)| reduce_mod(a as i64 * (j.rem_euclid(n as i64)), n))
            .collect();
        Self::build(self.field.clone(), exps)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert!(self.field == other.field);
        let group = self.field.character_group();
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .zip(&group.orders)
            .map(|((&a, &b), &n)| (a + b) % n)
            .collect();
        Self::build(self.field.clone(), exps)
    }

    fn trivial_on_kernel_to(&self, d: u64) -> bool {
        let f = self.field.conductor();
        let mut a = 1 % f;
        loop {
            if gcd(a, f) == 1 && self.value_exponent(a as i64) != Some(0) {
                return false;
            }
            a += d;
            if a >= f {
                return true;
            }
        }
    }

    /// The conductor of the character.
    pub fn conductor(&self) -> u64 {
        let mut d = self.field.conductor();
        loop {
            let next = factor(d)
                .into_iter()
                .map(|(p, _)| d / p)
                .find(|&e| self.trivial_on_kernel_to(e));
            match next {
                Some(e) => d = e,
                None => break,
            }
        }
        if d % 4 == 2 {
            d /= 2;
        }
        d
    }

    /// Value of the associated primitive character at a, as an exponent of
    /// zeta_order; None when a is not coprime to the conductor.
    pub fn primitive_value_exponent(&self, a: i64, conductor: u64) -> Option<u64> {
        let r = reduce_mod(a, conductor.max(1));
        if gcd(r, conductor) != 1 {
            return None;
        }
        let f = self.field.conductor();
        let mut lift = r;
        while gcd(lift, f) != 1 {
            lift += conductor;
        }
        self.value_exponent(lift as i64)
    }
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "chi(f={}, order={}, exps={:?})",
            self.field.conductor(),
            self.order,
            self.exps
        )
    }
}

impl AbelianField {
    pub fn character_group(&self) -> &CharacterGroup {
        self.characters_cache()
    }
}
