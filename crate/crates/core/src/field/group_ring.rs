use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{AbelianField, GaloisElement};
use crate::arith::{AdicRing, CyclotomicNumber, Rational, Zl};
use crate::error::{Error, Result};

/// Coefficient rings for group-ring elements.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    /// Parameters shared by all coefficients of one element.
    type Ring: Clone + PartialEq + fmt::Debug;
    fn zero(ring: &Self::Ring) -> Self;
    fn from_i64(ring: &Self::Ring, v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
}

impl Coefficient for Rational {
    type Ring = ();
    fn zero(_: &()) -> Self {
        <Rational as Zero>::zero()
    }
    fn from_i64(_: &(), v: i64) -> Self {
        Rational::from_integer(v.into())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Coefficient for Zl {
    type Ring = AdicRing;
    fn zero(ring: &AdicRing) -> Self {
        ring.zero()
    }
    fn from_i64(ring: &AdicRing, v: i64) -> Self {
        ring.from_i64(v)
    }
    fn is_zero(&self) -> bool {
        Zl::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        Zl::add(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Zl::mul(self, o)
    }
    fn neg(&self) -> Self {
        Zl::neg(self)
    }
}

/// A finitely supported map Gal(F/Q) -> coefficients, keyed by canonical representative.
#[derive(Clone, PartialEq)]
pub struct GroupRingElement<C: Coefficient> {
    field: AbelianField,
    ring: C::Ring,
    coeffs: BTreeMap<u64, C>,
}

pub type RationalElement = GroupRingElement<Rational>;
pub type AdicElement = GroupRingElement<Zl>;

impl<C: Coefficient> GroupRingElement<C> {
    pub fn zero(field: &AbelianField, ring: &C::Ring) -> Self {
        GroupRingElement {
            field: field.clone(),
            ring: ring.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(field: &AbelianField, ring: &C::Ring) -> Self {
        Self::scalar(field, ring, C::from_i64(ring, 1))
    }

    pub fn scalar(field: &AbelianField, ring: &C::Ring, c: C) -> Self {
        Self::monomial(&field.identity(), ring, c)
    }

    /// c * g.
    pub fn monomial(g: &GaloisElement, ring: &C::Ring, c: C) -> Self {
        let mut out = Self::zero(g.field(), ring);
        out.add_term(g.rep(), c);
        out
    }

    /// The sum of all group elements.
    pub fn norm_element(field: &AbelianField, ring: &C::Ring) -> Self {
        let mut out = Self::zero(field, ring);
        for &r in field.reps() {
            out.add_term(r, C::from_i64(ring, 1));
        }
        out
    }

    /// Build from (representative, coefficient) pairs; representatives are canonicalized.
    pub fn from_terms(
        field: &AbelianField,
        ring: &C::Ring,
        terms: impl IntoIterator<Item = (u64, C)>,
    ) -> Self {
        let mut out = Self::zero(field, ring);
        for (r, c) in terms {
            out.add_term(field.canonical(r), c);
        }
        out
    }

    pub fn field(&self) -> &AbelianField {
        &self.field
    }

    pub fn ring(&self) -> &C::Ring {
        &self.ring
    }

    /// Add c to the coefficient of the element with canonical representative `rep`.
    pub fn add_term(&mut self, rep: u64, c: C) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&rep) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.coeffs.remove(&rep);
                } else {
                    *old = s;
                }
            }
            None => {
                self.coeffs.insert(rep, c);
            }
        }
    }

    pub fn coeff(&self, g: &GaloisElement) -> C {
        self.coeff_rep(g.rep())
    }

    pub fn coeff_rep(&self, rep: u64) -> C {
        self.coeffs
            .get(&rep)
            .cloned()
            .unwrap_or_else(|| C::zero(&self.ring))
    }

    /// Nonzero terms as (canonical representative, coefficient), sorted by representative.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &C)> {
        self.coeffs.iter().map(|(&r, c)| (r, c))
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field != other.field || self.ring != other.ring {
            Err(Error::FieldMismatch)
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (&r, c) in &other.coeffs {
            out.add_term(r, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map_coeffs(|x| x.mul(c))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.field, &self.ring);
        for (&a, x) in &self.coeffs {
            for (&b, y) in &other.coeffs {
                out.add_term(self.field.mul_reps(a, b), x.mul(y));
            }
        }
        Ok(out)
    }

    /// g * self.
    pub fn shift(&self, g: &GaloisElement) -> Self {
        let mut out = Self::zero(&self.field, &self.ring);
        for (&a, x) in &self.coeffs {
            out.add_term(self.field.mul_reps(a, g.rep()), x.clone());
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        let mut out = Self::zero(&self.field, &self.ring);
        for (&r, c) in &self.coeffs {
            out.add_term(r, f(c));
        }
        out
    }

    /// Apply g -> g^{-1} to the group elements.
    pub fn inversion(&self) -> Self {
        let mut out = Self::zero(&self.field, &self.ring);
        for (&r, c) in &self.coeffs {
            out.add_term(self.field.inv_rep(r), c.clone());
        }
        out
    }

    /// Image under the trivial character.
    pub fn augmentation(&self) -> C {
        self.coeffs
            .values()
            .fold(C::zero(&self.ring), |acc, c| acc.add(c))
    }

    /// Linear extension of the restriction map to a subfield.
    pub fn restrict(&self, k: &AbelianField) -> Result<Self> {
        if !self.field.contains(k) {
            return Err(Error::NotSubfield {
                f: self.field.conductor(),
                sub_f: k.conductor(),
            });
        }
        let mut out = Self::zero(k, &self.ring);
        let fk = k.conductor();
        for (&r, c) in &self.coeffs {
            out.add_term(k.canonical(r % fk), c.clone());
        }
        Ok(out)
    }

    /// Transport to another coefficient ring.
    pub fn convert<D: Coefficient>(
        &self,
        ring: &D::Ring,
        f: impl Fn(&C) -> Result<D>,
    ) -> Result<GroupRingElement<D>> {
        let mut out = GroupRingElement::zero(&self.field, ring);
        for (&r, c) in &self.coeffs {
            out.add_term(r, f(c)?);
        }
        Ok(out)
    }
}

impl RationalElement {
    pub fn rational_zero(field: &AbelianField) -> Self {
        Self::zero(field, &())
    }

    pub fn rational_one(field: &AbelianField) -> Self {
        Self::one(field, &())
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.denom().is_one())
    }

    /// Reduce to Z/l^k coefficients.
    pub fn to_adic(&self, ring: &AdicRing) -> Result<AdicElement> {
        self.convert(ring, |c| ring.from_rational(c))
    }

    /// Image under a character, sum of coeff(g) * chi(g).
    pub fn evaluate(&self, chi: &super::DirichletCharacter) -> Result<CyclotomicNumber> {
        if *chi.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        let e = chi.order();
        let mut sums = vec![<Rational as Zero>::zero(); e as usize];
        for (&r, c) in &self.coeffs {
            let k = chi.value_exponent(r as i64).unwrap();
            sums[k as usize] += c;
        }
        Ok(CyclotomicNumber::from_exponent_sums(e, sums))
    }
}

impl AdicElement {
    pub fn adic_zero(field: &AbelianField, ring: &AdicRing) -> Self {
        Self::zero(field, ring)
    }

    /// Drop coefficients to a coarser precision.
    pub fn coarsen(&self, precision: u32) -> Self {
        let ring = self.ring.coarsen(precision);
        let m = ring.modulus();
        let mut out = Self::zero(&self.field, &ring);
        for (&r, c) in &self.coeffs {
            out.add_term(r, c.reduce_to(m));
        }
        out
    }
}

impl<C: Coefficient + fmt::Display> fmt::Display for GroupRingElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (r, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})[{}]", c, r)?;
        }
        Ok(())
    }
}

impl<C: Coefficient> fmt::Debug for GroupRingElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GroupRing(f={}, {:?})",
            self.field.conductor(),
            self.coeffs
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};

    #[test]
    fn norm_element_restricts() {
        let f = AbelianField::cyclotomic(15);
        let k = AbelianField::cyclotomic(5);
        let n = RationalElement::norm_element(&f, &());
        let r = n.restrict(&k).unwrap();
        assert_eq!(r, RationalElement::norm_element(&k, &()).scale(&rat_int(2)));
        let one = RationalElement::rational_one(&f);
        assert_eq!(one.restrict(&k).unwrap(), RationalElement::rational_one(&k));
    }

    #[test]
    fn ring_operations() {
        let f = AbelianField::cyclotomic(5);
        let g = f.artin(2).unwrap();
        let x = RationalElement::monomial(&g, &(), rat(1, 2));
        let y = x.mul(&x).unwrap();
        assert_eq!(
            y,
            RationalElement::monomial(&f.artin(4).unwrap(), &(), rat(1, 4))
        );
        assert!(x.sub(&x).unwrap().is_zero());
        assert_eq!(
            x.inversion(),
            RationalElement::monomial(&f.artin(3).unwrap(), &(), rat(1, 2))
        );
        let ring = AdicRing::new(3, 4).unwrap();
        let a = x.to_adic(&ring).unwrap();
        assert_eq!(a.augmentation().mul(&ring.from_i64(2)), ring.one());
    }
}
