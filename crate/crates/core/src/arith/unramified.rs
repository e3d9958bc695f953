//! The unramified extension of Z/l^k of degree r, as Z/l^k[x]/(g) with g
//! irreducible mod l. Used to hold l-adic roots of unity of order prime to l.

use super::{factor, mul_mod};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct UnramifiedRing {
    ell: u64,
    modulus: u64,
    precision: u32,
    // monic, constant term first, length degree + 1
    g: Vec<u64>,
}

pub type Elem = Vec<u64>;

impl UnramifiedRing {
    /// Build the degree-`r` ring over Z/l^precision.
    pub fn new(ell: u64, precision: u32, r: usize) -> Result<Self> {
        let modulus = super::checked_prime_power(ell, precision).ok_or(Error::ModulusTooLarge {
            ell,
            prec: precision,
        })?;
        let g = find_irreducible(ell, r);
        Ok(UnramifiedRing {
            ell,
            modulus,
            precision,
            g,
        })
    }

    pub fn degree(&self) -> usize {
        self.g.len() - 1
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn constant(&self, c: u64) -> Elem {
        let mut v = vec![0; self.degree()];
        v[0] = c % self.modulus;
        v
    }

    pub fn one(&self) -> Elem {
        self.constant(1)
    }

    /// The constant term, if the element lies in Z/l^k.
    pub fn as_constant(&self, a: &Elem) -> Option<u64> {
        if a.iter().skip(1).all(|&c| c == 0) {
            Some(a[0])
        } else {
            None
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| ((x as u128 + y as u128) % self.modulus as u128) as u64)
            .collect()
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        poly_mulmod(a, b, &self.g, self.modulus)
    }

    pub fn pow(&self, a: &Elem, mut e: u128) -> Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// A primitive e-th root of unity, e prime to l, with degree a multiple of ord_e(l).
    pub fn root_of_unity(&self, e: u64) -> Result<Elem> {
        if e.is_multiple_of(self.ell) {
            return Err(Error::NotSemisimple {
                ell: self.ell,
                order: e,
            });
        }
        let r = self.degree() as u32;
        let q = (self.ell as u128)
            .checked_pow(r)
            .ok_or_else(|| Error::Invalid("residue field too large".into()))?;
        if (q - 1) % e as u128 != 0 {
            return Err(Error::Invalid(format!(
                "degree {} too small for roots of unity of order {}",
                r, e
            )));
        }
        let primes: Vec<u64> = factor(e).into_iter().map(|(p, _)| p).collect();
        let residue = UnramifiedRing {
            ell: self.ell,
            modulus: self.ell,
            precision: 1,
            g: self.g.iter().map(|c| c % self.ell).collect(),
        };
        let mut cand = 1u128;
        loop {
            let a = digits(cand, self.ell, self.degree());
            cand += 1;
            if a.iter().all(|&c| c == 0) {
                continue;
            }
            let b = residue.pow(&a, (q - 1) / e as u128);
            if primes
                .iter()
                .all(|&p| residue.pow(&b, (e / p) as u128) != residue.one())
            {
                // Teichmüller lift: iterate b -> b^q
                let mut w = b.clone();
                for _ in 0..self.precision {
                    w = self.pow(&w, q);
                }
                return Ok(w);
            }
            if cand > q {
                return Err(Error::Invalid("no root of unity found".into()));
            }
        }
    }
}

/// Multiplicative order of `a` modulo `m` (gcd(a, m) = 1).
pub fn multiplicative_order(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let mut k = 1;
    let mut x = a % m;
    while x != 1 {
        x = mul_mod(x, a, m);
        k += 1;
    }
    k
}

fn digits(mut n: u128, base: u64, len: usize) -> Vec<u64> {
    let mut v = vec![0; len];
    for d in v.iter_mut() {
        *d = (n % base as u128) as u64;
        n /= base as u128;
    }
    v
}

fn trim(p: &mut Vec<u64>) {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
}

fn poly_mulmod(a: &[u64], b: &[u64], g: &[u64], m: u64) -> Vec<u64> {
    let d = g.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                prod[i + j] = ((prod[i + j] as u128 + mul_mod(x, y, m) as u128) % m as u128) as u64;
            }
        }
    }
    poly_rem_monic(prod, g, m, d)
}

fn poly_rem_monic(mut p: Vec<u64>, g: &[u64], m: u64, d: usize) -> Vec<u64> {
    if p.len() < d {
        p.resize(d, 0);
        return p;
    }
    for i in (d..p.len()).rev() {
        let c = p[i];
        if c == 0 {
            continue;
        }
        p[i] = 0;
        for j in 0..d {
            let t = mul_mod(c, g[j], m);
            p[i - d + j] = ((p[i - d + j] as u128 + (m - t) as u128) % m as u128) as u64;
        }
    }
    p.truncate(d.max(1));
    if d == 0 {
        p = vec![0];
    }
    p
}

// remainder of a by b over F_p, b nonzero with any leading coefficient
fn poly_rem_field(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    let db = b.len() - 1;
    let lead_inv = super::inv_mod(b[db], p).unwrap();
    while r.len() > db && !(r.len() == 1 && r[0] == 0) {
        let dr = r.len() - 1;
        let c = mul_mod(r[dr], lead_inv, p);
        for j in 0..=db {
            let t = mul_mod(c, b[j], p);
            r[dr - db + j] = (r[dr - db + j] + p - t) % p;
        }
        trim(&mut r);
        if dr == 0 {
            break;
        }
    }
    r
}

fn poly_gcd_field(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !(y.len() == 1 && y[0] == 0) {
        let r = poly_rem_field(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

// x^(p^k) mod g over F_p
fn frobenius_power(g: &[u64], p: u64, k: u32) -> Vec<u64> {
    let d = g.len() - 1;
    let mut x = vec![0u64; d.max(2)];
    x[1] = 1;
    let mut x = poly_rem_monic(x, g, p, d);
    let ring = UnramifiedRing {
        ell: p,
        modulus: p,
        precision: 1,
        g: g.to_vec(),
    };
    for _ in 0..k {
        x = ring.pow(&x, p as u128);
    }
    x
}

/// Rabin's irreducibility test for a monic polynomial over F_p.
pub fn is_irreducible(g: &[u64], p: u64) -> bool {
    let d = g.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let mut x = vec![0u64; d];
    x[1] = 1;
    if frobenius_power(g, p, d as u32) != x {
        return false;
    }
    for (q, _) in factor(d as u64) {
        let mut h = frobenius_power(g, p, (d as u64 / q) as u32);
        h[1] = (h[1] + p - 1) % p;
        let gg = poly_gcd_field(g, &h, p);
        if gg.len() > 1 {
            return false;
        }
    }
    true
}

/// First monic irreducible polynomial of degree r over F_p in a fixed enumeration.
pub fn find_irreducible(p: u64, r: usize) -> Vec<u64> {
    if r == 1 {
        return vec![0, 1];
    }
    let mut n = 1u128;
    loop {
        let mut g = digits(n, p, r);
        g.push(1);
        if g[0] != 0 && is_irreducible(&g, p) {
            return g;
        }
        n += 1;
    }
}

/// Reduce a root-of-unity exponent table `zeta^j` for j in 0..e.
pub fn power_table(ring: &UnramifiedRing, zeta: &Elem, e: u64) -> Vec<Elem> {
    let mut out = Vec::with_capacity(e as usize);
    let mut cur = ring.one();
    for _ in 0..e {
        out.push(cur.clone());
        cur = ring.mul(&cur, zeta);
    }
    out
}
