//! Logarithmic valuations: ordinary valuations away from l, and
//! -Log_l(N(x)) / deg at the l-adic place of Q_l(zeta_{l^k}).
//!
//! Degrees: deg(p) = Log_l(p) for p != l. At the l-adic place of
//! Q_l(zeta_{l^k}) the degree is Log_l(1 + l) for k = 0 and
//! l^{k-1} Log_l(1 + l) for k >= 1. Local norms from Q_l(zeta_{l^k}) cover
//! 1 + l^k Z_l, so with this choice the valuation maps onto Z_l exactly.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{
    checked_prime_power, cyclotomic_polynomial, euler_phi, factor, is_prime, iwasawa_log, val_big,
    CyclotomicNumber, PadicNumber, Rational,
};
use crate::error::{Error, Result};

/// Q_l(zeta_{l^k}) at a working relative precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalCyclotomicField {
    ell: u64,
    level: u32,
    precision: u32,
}

impl LocalCyclotomicField {
    pub fn new(ell: u64, level: u32, precision: u32) -> Result<Self> {
        if ell < 3 || !is_prime(ell) {
            return Err(Error::NotOddPrime(ell));
        }
        if precision == 0 {
            return Err(Error::Invalid("precision must be positive".into()));
        }
        checked_prime_power(ell, level).ok_or(Error::ModulusTooLarge { ell, prec: level })?;
        Ok(LocalCyclotomicField {
            ell,
            level,
            precision,
        })
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// [Q_l(zeta_{l^k}) : Q_l] = phi(l^k), totally ramified.
    pub fn degree(&self) -> usize {
        euler_phi(self.order()) as usize
    }

    fn order(&self) -> u64 {
        self.ell.pow(self.level)
    }

    pub fn element(&self, coeffs: Vec<PadicNumber>) -> Result<LocalElement> {
        if coeffs.iter().any(|c| c.prime() != self.ell) {
            return Err(Error::Invalid("coefficient over the wrong prime".into()));
        }
        let mut out = LocalElement {
            field: *self,
            coeffs: vec![PadicNumber::exact_zero(self.ell); self.degree()],
        };
        for (i, c) in coeffs.into_iter().enumerate() {
            out.add_monomial(i, c);
        }
        Ok(out)
    }

    pub fn from_rationals(&self, coeffs: &[Rational]) -> Result<LocalElement> {
        let c = coeffs
            .iter()
            .map(|x| PadicNumber::from_rational(self.ell, x, self.precision))
            .collect::<Result<Vec<_>>>()?;
        self.element(c)
    }

    pub fn rational(&self, x: &Rational) -> Result<LocalElement> {
        self.from_rationals(std::slice::from_ref(x))
    }

    /// Image of a number of Q(zeta_m), m | l^k, under zeta_m -> zeta_{l^k}^{l^k / m}.
    pub fn from_cyclotomic(&self, x: &CyclotomicNumber) -> Result<LocalElement> {
        let m = x.order();
        if !self.order().is_multiple_of(m) {
            return Err(Error::Invalid(format!(
                "Q(zeta_{}) is not inside Q(zeta_{})",
                m,
                self.order()
            )));
        }
        let x = x.lift(self.order().max(1));
        self.from_rationals(x.coeffs())
    }

    pub fn zeta(&self) -> Result<LocalElement> {
        // degree 1 only at k = 0, where zeta = 1
        let c = if self.degree() == 1 {
            vec![Rational::one()]
        } else {
            vec![Rational::zero(), Rational::one()]
        };
        self.from_rationals(&c)
    }

    /// 1 - zeta_{l^k}, a uniformizer for k >= 1.
    pub fn one_minus_zeta(&self) -> Result<LocalElement> {
        if self.level == 0 {
            return Err(Error::Invalid(
                "Q_l has no nontrivial l-power root of unity".into(),
            ));
        }
        self.from_rationals(&[Rational::one(), -Rational::one()])
    }
}

/// A polynomial in zeta_{l^k} of degree < phi(l^k).
#[derive(Clone, PartialEq)]
pub struct LocalElement {
    field: LocalCyclotomicField,
    coeffs: Vec<PadicNumber>,
}

impl LocalElement {
    pub fn field(&self) -> &LocalCyclotomicField {
        &self.field
    }

    pub fn coeffs(&self) -> &[PadicNumber] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    // add c * zeta^i, reducing with the cyclotomic polynomial
    fn add_monomial(&mut self, i: usize, c: PadicNumber) {
        if c.is_exact_zero() {
            return;
        }
        let d = self.coeffs.len();
        if i < d {
            self.coeffs[i] = self.coeffs[i].add(&c);
            return;
        }
        // zeta^i = zeta^{i - d} * zeta^d, zeta^d = -sum_{j<d} phi_j zeta^j
        let phi = cyclotomic_polynomial(self.field.order().max(1));
        for (j, &pj) in phi.iter().enumerate().take(d) {
            if pj != 0 {
                let t = c.mul(
                    &PadicNumber::from_i64(self.field.ell, -pj, self.field.precision).unwrap(),
                );
                self.add_monomial(i - d + j, t);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a = a.add(b);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let d = self.coeffs.len();
        let mut out = LocalElement {
            field: self.field,
            coeffs: vec![PadicNumber::exact_zero(self.field.ell); d],
        };
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out.add_monomial(i + j, a.mul(b));
            }
        }
        Ok(out)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field.ell != other.field.ell || self.field.level != other.field.level {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    // self * zeta^j
    fn shifted(&self, j: usize) -> Self {
        let mut out = LocalElement {
            field: self.field,
            coeffs: vec![PadicNumber::exact_zero(self.field.ell); self.coeffs.len()],
        };
        for (i, c) in self.coeffs.iter().enumerate() {
            out.add_monomial(i + j, c.clone());
        }
        out
    }
}

impl fmt::Debug for LocalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Local(l={}, k={}, {:?})",
            self.field.ell, self.field.level, self.coeffs
        )
    }
}

/// Determinant by elimination with minimal-valuation pivots.
fn padic_determinant(mut a: Vec<Vec<PadicNumber>>, ell: u64) -> Result<PadicNumber> {
    let n = a.len();
    let mut det: Option<PadicNumber> = None;
    let mut negate = false;
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .min_by_key(|&r| a[r][col].valuation().unwrap());
        let Some(p) = pivot else {
            return Err(Error::PrecisionExhausted);
        };
        if p != col {
            a.swap(p, col);
            negate = !negate;
        }
        let pv = a[col][col].clone();
        det = Some(det.map_or(pv.clone(), |d| d.mul(&pv)));
        let inv = pv.inv()?;
        for r in col + 1..n {
            if a[r][col].is_exact_zero() {
                continue;
            }
            let factor = a[r][col].mul(&inv);
            for c in col..n {
                let t = factor.mul(&a[col][c]);
                a[r][c] = a[r][c].sub(&t);
            }
        }
    }
    let det = det.unwrap_or(PadicNumber::from_i64(ell, 1, 1)?);
    Ok(if negate { det.neg() } else { det })
}

/// N_{Q_l(zeta_{l^k}) / Q_l}(x), the determinant of multiplication by x.
pub fn local_norm(x: &LocalElement) -> Result<PadicNumber> {
    if x.coeffs.iter().all(|c| c.is_exact_zero()) {
        return Err(Error::ZeroInput);
    }
    let d = x.coeffs.len();
    // column j holds x * zeta^j
    let columns: Vec<LocalElement> = (0..d).map(|j| x.shifted(j)).collect();
    let matrix: Vec<Vec<PadicNumber>> = (0..d)
        .map(|i| columns.iter().map(|c| c.coeffs[i].clone()).collect())
        .collect();
    padic_determinant(matrix, x.field.ell)
}

/// A place of Q_l(zeta_{l^k}) (only the l-adic one) or of Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    /// The place above the rational prime p != l.
    Prime(u64),
    /// The l-adic place.
    Ell,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{}", p),
            Place::Ell => write!(f, "l"),
        }
    }
}

/// A place with its calibrated degree.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaceDegree {
    pub place: Place,
    pub degree: PadicNumber,
}

/// deg of a place of Q (level 0) or of the l-adic place of Q_l(zeta_{l^k}).
pub fn place_degree(place: Place, ell: u64, level: u32, precision: u32) -> Result<PlaceDegree> {
    let work = precision + 2;
    let degree = match place {
        Place::Prime(p) => {
            if p == ell || !is_prime(p) {
                return Err(Error::Invalid(format!(
                    "{} is not a prime different from {}",
                    p, ell
                )));
            }
            iwasawa_log(&PadicNumber::from_i64(ell, p as i64, work)?, work)?
        }
        Place::Ell => {
            let base = iwasawa_log(&PadicNumber::from_i64(ell, 1 + ell as i64, work)?, work)?;
            if level == 0 {
                base
            } else {
                base.mul(&PadicNumber::from_bigint(
                    ell,
                    &BigInt::from(ell).pow(level - 1),
                    work,
                )?)
            }
        }
    };
    if degree.is_zero() {
        return Err(Error::PrecisionExhausted);
    }
    Ok(PlaceDegree { place, degree })
}

fn check_ell(ell: u64) -> Result<()> {
    if ell < 3 || !is_prime(ell) {
        return Err(Error::NotOddPrime(ell));
    }
    Ok(())
}

/// Logarithmic valuation of a nonzero rational at a place of Q.
pub fn logval_rational(
    x: &Rational,
    place: Place,
    ell: u64,
    precision: u32,
) -> Result<PadicNumber> {
    check_ell(ell)?;
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    match place {
        Place::Prime(p) if p != ell => {
            if !is_prime(p) {
                return Err(Error::Invalid(format!("{} is not prime", p)));
            }
            let v = val_big(x.numer(), p) as i64 - val_big(x.denom(), p) as i64;
            PadicNumber::from_i64(ell, v, precision)
        }
        _ => {
            let work = precision + 2;
            let deg = place_degree(Place::Ell, ell, 0, precision)?;
            let log = iwasawa_log(&PadicNumber::from_rational(ell, x, work)?, work)?;
            Ok(log.neg().div(&deg.degree)?.truncate(precision as i64))
        }
    }
}

/// Logarithmic valuation at the l-adic place of Q_l(zeta_{l^k}).
pub fn logval(x: &LocalElement) -> Result<PadicNumber> {
    let f = x.field();
    let work = f.precision + 2;
    let norm = local_norm(x)?;
    let deg = place_degree(Place::Ell, f.ell, f.level, f.precision)?;
    let log = iwasawa_log(&norm, work)?;
    log.neg().div(&deg.degree)
}

/// An element of Q_l(zeta_{l^k}) whose logarithmic valuation is -1:
/// (1 + l)^{1/(l-1)} for k >= 1, and 1 + l for k = 0.
pub fn calibration_element(field: &LocalCyclotomicField) -> Result<LocalElement> {
    let ell = field.ell;
    let work = field.precision + 2;
    let one_plus = PadicNumber::from_i64(ell, 1 + ell as i64, work)?;
    let u = if field.level == 0 {
        one_plus
    } else {
        let m = BigInt::from(ell).pow(work);
        let e = crate::arith::padic::mod_inverse(&BigInt::from(ell - 1), &m).unwrap();
        let r = BigInt::from(1 + ell).modpow(&e, &m);
        PadicNumber::from_residue(ell, &r, work as i64)
    };
    field.element(vec![u])
}

/// One place in a degree-zero report.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeTerm {
    pub place: Place,
    pub nu: PadicNumber,
    pub deg: PadicNumber,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeZeroReport {
    pub x: Rational,
    pub ell: u64,
    pub terms: Vec<DegreeTerm>,
    pub sum: PadicNumber,
    /// The sum is certified to vanish modulo l^this.
    pub sum_valuation_ge: u32,
    pub holds: bool,
}

/// sum over p | x (p != l) and the l-adic place of nu_p(x) deg(p), which
/// must vanish modulo l^M for principal elements.
pub fn degree_zero_check(x: &Rational, ell: u64, m: u32) -> Result<DegreeZeroReport> {
    check_ell(ell)?;
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    let work = m + 2;
    let mut primes: Vec<u64> = Vec::new();
    for n in [x.numer(), x.denom()] {
        let n = n.abs();
        let small: u64 = n
            .try_into()
            .map_err(|_| Error::Invalid("numerator and denominator must fit in 64 bits".into()))?;
        primes.extend(
            factor(small)
                .into_iter()
                .map(|(p, _)| p)
                .filter(|&p| p != ell),
        );
    }
    primes.sort_unstable();
    primes.dedup();
    let mut terms = Vec::new();
    for p in primes {
        let place = Place::Prime(p);
        terms.push(DegreeTerm {
            place,
            nu: logval_rational(x, place, ell, work)?,
            deg: place_degree(place, ell, 0, work)?.degree,
        });
    }
    terms.push(DegreeTerm {
        place: Place::Ell,
        nu: logval_rational(x, Place::Ell, ell, work)?,
        deg: place_degree(Place::Ell, ell, 0, work)?.degree,
    });
    let sum = terms.iter().fold(PadicNumber::exact_zero(ell), |acc, t| {
        acc.add(&t.nu.mul(&t.deg))
    });
    let reached = match sum.valuation() {
        Some(v) => v,
        None => sum.absolute_precision().unwrap_or(i64::MAX),
    };
    Ok(DegreeZeroReport {
        x: x.clone(),
        ell,
        terms,
        sum,
        sum_valuation_ge: m,
        holds: reached >= m as i64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};

    fn is(x: &PadicNumber, v: i64, m: u32) -> bool {
        x.sub(&PadicNumber::from_i64(x.prime(), v, m).unwrap())
            .is_zero()
    }

    #[test]
    fn norms() {
        for ell in [3u64, 5, 7] {
            let k1 = LocalCyclotomicField::new(ell, 1, 10).unwrap();
            let n = local_norm(&k1.one_minus_zeta().unwrap()).unwrap();
            assert!(is(&n, ell as i64, 10));
            assert_eq!(n.valuation(), Some(1));
            let k2 = LocalCyclotomicField::new(ell, 2, 10).unwrap();
            assert!(is(
                &local_norm(&k2.one_minus_zeta().unwrap()).unwrap(),
                ell as i64,
                8
            ));
            assert!(is(&local_norm(&k2.zeta().unwrap()).unwrap(), 1, 8));
            let r = local_norm(&k2.rational(&rat(2, 3)).unwrap()).unwrap();
            let phi = euler_phi(ell * ell) as i64;
            let expected =
                PadicNumber::from_rational(ell, &(rat(2, 3).pow(phi as i32)), 10).unwrap();
            assert!(r.sub(&expected).is_zero());
        }
        let k = LocalCyclotomicField::new(3, 1, 5).unwrap();
        assert_eq!(
            local_norm(&k.rational(&rat_int(0)).unwrap()),
            Err(Error::ZeroInput)
        );
    }

    #[test]
    fn norm_matches_exact() {
        let k = LocalCyclotomicField::new(5, 2, 12).unwrap();
        let x = CyclotomicNumber::from_polynomial(
            25,
            vec![rat_int(3), rat_int(1), rat(2, 7), rat_int(-4)],
        );
        let exact = PadicNumber::from_rational(5, &x.norm(), 12).unwrap();
        let local = local_norm(&k.from_cyclotomic(&x).unwrap()).unwrap();
        assert!(local.sub(&exact).truncate(8).is_zero());
    }

    #[test]
    fn valuations() {
        assert!(is(
            &logval_rational(&rat_int(2), Place::Prime(2), 3, 8).unwrap(),
            1,
            8
        ));
        assert!(is(
            &logval_rational(&rat_int(4), Place::Ell, 3, 8).unwrap(),
            -1,
            6
        ));
        assert!(logval_rational(&rat_int(-9), Place::Ell, 3, 8)
            .unwrap()
            .is_zero());
        for level in 0..=2 {
            let k = LocalCyclotomicField::new(5, level, 10).unwrap();
            let c = calibration_element(&k).unwrap();
            assert!(is(&logval(&c).unwrap(), -1, 6), "level {}", level);
            if level > 0 {
                let z = k
                    .zeta()
                    .unwrap()
                    .mul(&k.rational(&rat_int(25)).unwrap())
                    .unwrap();
                assert!(logval(&z).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn degree_zero() {
        let r = degree_zero_check(&rat_int(-1), 3, 8).unwrap();
        assert!(r.holds && r.terms.iter().all(|t| t.nu.is_zero()));
        let r = degree_zero_check(&rat_int(2), 3, 8).unwrap();
        assert!(r.holds && r.terms.len() == 2);
        assert!(degree_zero_check(&rat_int(12), 5, 8).unwrap().holds);
        assert!(
            degree_zero_check(&rat(-1000003, 999983), 7, 12)
                .unwrap()
                .holds
        );
    }
}
