//! Elements of Q(zeta_m) in the power basis modulo the m-th cyclotomic polynomial.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use super::{euler_phi, Rational};

static CYCLOTOMIC_CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();

/// Coefficients (constant term first) of the monic m-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(m: u64) -> Arc<Vec<i64>> {
    assert!(m >= 1);
    let cache = CYCLOTOMIC_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by every Phi_d with d | m, d < m
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            let pd = cyclotomic_polynomial(d);
            num = exact_divide(&num, &pd);
        }
    }
    let p = Arc::new(num);
    cache.lock().unwrap().insert(m, p.clone());
    p
}

fn exact_divide(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    let mut q = vec![0i64; nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = rem[i + dd];
        q[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// An element `sum c_i zeta_m^i` of the m-th cyclotomic field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    order: u64,
    coeffs: Vec<Rational>,
}

impl CyclotomicNumber {
    /// Reduce an arbitrary polynomial in zeta_m modulo Phi_m.
    pub fn from_polynomial(order: u64, poly: Vec<Rational>) -> Self {
        let phi = cyclotomic_polynomial(order);
        let deg = phi.len() - 1;
        let mut p = poly;
        if p.len() < deg {
            p.resize(deg, Rational::zero());
        }
        for i in (deg..p.len()).rev() {
            let c = std::mem::take(&mut p[i]);
            if c.is_zero() {
                continue;
            }
            for (j, &pj) in phi.iter().enumerate().take(deg) {
                if pj != 0 {
                    p[i - deg + j] -= &c * Rational::from_integer(pj.into());
                }
            }
        }
        p.truncate(deg);
        CyclotomicNumber { order, coeffs: p }
    }

    /// Build from a vector indexed by exponents modulo `order`.
    pub fn from_exponent_sums(order: u64, sums: Vec<Rational>) -> Self {
        debug_assert_eq!(sums.len() as u64, order);
        Self::from_polynomial(order, sums)
    }

    pub fn zero(order: u64) -> Self {
        Self::from_polynomial(order, Vec::new())
    }

    pub fn from_rational(order: u64, r: Rational) -> Self {
        Self::from_polynomial(order, vec![r])
    }

    pub fn one(order: u64) -> Self {
        Self::from_rational(order, Rational::one())
    }

    /// zeta_m^k for any integer k.
    pub fn zeta_power(order: u64, k: i64) -> Self {
        let e = k.rem_euclid(order as i64) as usize;
        let mut p = vec![Rational::zero(); e + 1];
        p[e] = Rational::one();
        Self::from_polynomial(order, p)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs.iter().skip(1).all(Zero::is_zero) {
            Some(self.coeffs.first().cloned().unwrap_or_else(Rational::zero))
        } else {
            None
        }
    }

    /// Re-express inside Q(zeta_n) for a multiple n of the order.
    pub fn lift(&self, n: u64) -> Self {
        assert_eq!(
            n % self.order,
            0,
            "lift target must be a multiple of the order"
        );
        if n == self.order {
            return self.clone();
        }
        let step = (n / self.order) as usize;
        let mut p = vec![Rational::zero(); self.coeffs.len().saturating_sub(1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            p[i * step] = c.clone();
        }
        Self::from_polynomial(n, p)
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        if a.order == b.order {
            return (a.clone(), b.clone());
        }
        let n = super::lcm(a.order, b.order);
        (a.lift(n), b.lift(n))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = Self::common(self, other);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        CyclotomicNumber {
            order: a.order,
            coeffs,
        }
    }

    pub fn neg(&self) -> Self {
        CyclotomicNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CyclotomicNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = Self::common(self, other);
        let n = a.coeffs.len();
        let mut p = vec![Rational::zero(); 2 * n.max(1) - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    p[i + j] += x * y;
                }
            }
        }
        Self::from_polynomial(a.order, p)
    }

    pub fn conj(&self) -> Self {
        // zeta -> zeta^{-1}
        let m = self.order as usize;
        let mut p = vec![Rational::zero(); m];
        for (i, c) in self.coeffs.iter().enumerate() {
            p[(m - i) % m] += c;
        }
        Self::from_polynomial(self.order, p)
    }

    // columns: coordinates of zeta^i * self
    fn multiplication_matrix(&self) -> Vec<Vec<Rational>> {
        let n = self.coeffs.len();
        let mut cols = Vec::with_capacity(n);
        let mut cur = self.clone();
        let z = Self::zeta_power(self.order, 1);
        for _ in 0..n {
            cols.push(cur.coeffs.clone());
            cur = cur.mul(&z);
        }
        // transpose into rows
        (0..n)
            .map(|r| (0..n).map(|c| cols[c][r].clone()).collect())
            .collect()
    }

    /// Product of all Galois conjugates, i.e. the resultant of Phi_m with the
    /// representing polynomial (Phi_m is monic).
    pub fn norm(&self) -> Rational {
        determinant(self.multiplication_matrix())
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.coeffs.len();
        let mut rhs = vec![Rational::zero(); n];
        rhs[0] = Rational::one();
        let sol = solve(self.multiplication_matrix(), rhs)?;
        Some(CyclotomicNumber {
            order: self.order,
            coeffs: sol,
        })
    }
}

pub(crate) fn determinant(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            for c in col..n {
                let t = &factor * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    det
}

fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(piv, col);
        b.swap(piv, col);
        let p = a[col][col].clone();
        for c in col..n {
            a[col][c] /= &p;
        }
        b[col] /= &p;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in col..n {
                let t = &factor * &a[col][c];
                a[r][c] -= t;
            }
            let t = &factor * &b[col];
            b[r] -= t;
        }
    }
    Some(b)
}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "({})z{}", c, self.order)?,
                _ => write!(f, "({})z{}^{}", c, self.order, i)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Degree of Q(zeta_m) over Q.
pub fn field_degree(m: u64) -> u64 {
    euler_phi(m)
}
