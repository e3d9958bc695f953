//! The cyclotomic Z_l-tower over an abelian field in the semisimple case, and
//! the truncated Iwasawa algebra Z_l[Delta][[T]], T = gamma - 1.
//!
//! Elements live in the quotient of Z_l[Delta][[T]] by l^A + (l, T)^N, where A
//! is the element's own precision; this ideal is stable under the mirror and
//! the Tate twists, so both are exact on the quotient. Elements flagged exact
//! are honest polynomials of degree < N known modulo l^A.

use std::fmt;
use std::sync::Arc;

use crate::arith::{checked_prime_power, gcd, inv_mod, mul_mod, pow_mod, val_u64, AdicRing, Zl};
use crate::error::{Error, Result};
use crate::field::{crt, AbelianField, AdicElement};
use crate::lattice::local_normal_form;
use crate::stickelberger::check_twist;

/// Upper bound on |G_n| for internal limit approximations.
pub const LEVEL_BUDGET: u64 = 1 << 22;

struct TowerData {
    ell: u64,
    base: AbelianField,
    m: u32,
    f_prime: u64,
    kernel_prime: Vec<u64>,
    delta: AbelianField,
    ring: AdicRing,
    truncation: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    kappa: Vec<u64>,
    conj: usize,
    identity: usize,
}

/// A semisimple tower F = F_m, F_n = F * Q_{m+n}, with Delta realized as
/// the Galois group of F_0 and gamma normalized by kappa(gamma) = 1 + l.
#[derive(Clone)]
pub struct TowerContext(Arc<TowerData>);

impl TowerContext {
    pub fn new(ell: u64, base: &AbelianField, precision: u32, truncation: usize) -> Result<Self> {
        let ring = AdicRing::new(ell, precision)?;
        if precision == 0 || truncation == 0 {
            return Err(Error::Invalid(
                "precision and truncation degree must be positive".into(),
            ));
        }
        let f = base.conductor();
        if !f.is_multiple_of(ell) {
            return Err(Error::MissingRootsOfUnity(ell));
        }
        let mut lpow = 1u64;
        let mut e = 0u32;
        while f.is_multiple_of(lpow * ell) {
            lpow *= ell;
            e += 1;
        }
        let m = e - 1;
        let f_prime = f / lpow;
        for &h in base.kernel() {
            if h % ell != 1 {
                return Err(Error::MissingRootsOfUnity(ell));
            }
            if h % lpow != 1 {
                return Err(Error::Invalid(format!(
                    "kernel element {} has a nontrivial component in 1 + {}Z; the field is not \
                     a layer of the cyclotomic Z_{}-extension of an abelian field",
                    h, ell, ell
                )));
            }
        }
        let mut kernel_prime: Vec<u64> =
            base.kernel().iter().map(|&h| h % f_prime.max(1)).collect();
        kernel_prime.sort_unstable();
        kernel_prime.dedup();
        let dgens: Vec<i64> = kernel_prime
            .iter()
            .map(|&h| crt(h, f_prime, 1, ell) as i64)
            .collect();
        let delta = AbelianField::fixed_field(f_prime * ell, &dgens)?;
        let nd = delta.degree();
        if (nd as u64).is_multiple_of(ell) {
            return Err(Error::NotSemisimple {
                ell,
                order: nd as u64,
            });
        }
        let reps = delta.reps().to_vec();
        let mut mul = vec![0u32; nd * nd];
        for i in 0..nd {
            for j in 0..nd {
                mul[i * nd + j] = delta.index_of(delta.mul_reps(reps[i], reps[j])) as u32;
            }
        }
        let inv = reps
            .iter()
            .map(|&r| delta.index_of(delta.inv_rep(r)) as u32)
            .collect();
        let kappa = reps
            .iter()
            .map(|&r| ring.teichmuller(r % ell).value())
            .collect();
        let conj = delta.index_of(delta.conjugation().rep());
        let identity = delta.index_of(1);
        Ok(TowerContext(Arc::new(TowerData {
            ell,
            base: base.clone(),
            m,
            f_prime,
            kernel_prime,
            delta,
            ring,
            truncation,
            mul,
            inv,
            kappa,
            conj,
            identity,
        })))
    }

    pub fn ell(&self) -> u64 {
        self.0.ell
    }

    pub fn base(&self) -> &AbelianField {
        &self.0.base
    }

    /// F = F_m over the Delta-field F_0.
    pub fn offset(&self) -> u32 {
        self.0.m
    }

    pub fn delta_field(&self) -> &AbelianField {
        &self.0.delta
    }

    pub fn delta_order(&self) -> usize {
        self.0.delta.degree()
    }

    pub fn precision(&self) -> u32 {
        self.0.ring.precision
    }

    pub fn truncation(&self) -> usize {
        self.0.truncation
    }

    pub fn ring(&self) -> &AdicRing {
        &self.0.ring
    }

    fn modulus(&self) -> u64 {
        self.0.ring.modulus()
    }

    /// kappa(gamma) = 1 + l.
    pub fn kappa_gamma(&self) -> Zl {
        self.0.ring.from_u64(1 + self.0.ell)
    }

    /// kappa on Delta, the Teichmüller character of the class mod l.
    pub fn kappa_delta(&self, rep: u64) -> Zl {
        self.0
            .ring
            .from_u64(self.0.kappa[self.0.delta.index_of(rep)])
    }

    pub fn conjugation_rep(&self) -> u64 {
        self.0.delta.reps()[self.0.conj]
    }

    /// Conductor of F_n.
    pub fn level_conductor(&self, n: u32) -> u64 {
        self.0.f_prime * self.0.ell.pow(self.0.m + n + 1)
    }

    /// The field F_n.
    pub fn level_field(&self, n: u32) -> Result<AbelianField> {
        let lp =
            checked_prime_power(self.0.ell, self.0.m + n + 1).ok_or(Error::ModulusTooLarge {
                ell: self.0.ell,
                prec: self.0.m + n + 1,
            })?;
        let gens: Vec<i64> = self
            .0
            .kernel_prime
            .iter()
            .map(|&h| crt(h, self.0.f_prime, 1, lp) as i64)
            .collect();
        AbelianField::new(self.0.f_prime * lp, &gens)
    }

    fn same(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.ell == other.0.ell
                && self.0.base == other.0.base
                && self.0.ring == other.0.ring
                && self.0.truncation == other.0.truncation)
    }

    fn nd(&self) -> usize {
        self.0.delta.degree()
    }
}

impl PartialEq for TowerContext {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl fmt::Debug for TowerContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Tower(l={}, F={:?}, m={}, Delta={:?}, M={}, N={})",
            self.0.ell,
            self.0.base,
            self.0.m,
            self.0.delta,
            self.precision(),
            self.truncation()
        )
    }
}

/// Splitting of (Z/f' l^{L+1})^x into Delta x Z/l^L at absolute level L.
struct LevelSplit {
    ell: u64,
    f_prime: u64,
    lpow: u64,
    size: u64,
    // Teichmüller lifts mod l^{L+1} of 0..l-1 and their inverses
    teich: Vec<u64>,
    teich_inv: Vec<u64>,
    dlog: Vec<u32>,
}

impl LevelSplit {
    fn new(ell: u64, f_prime: u64, level: u32) -> Result<Self> {
        let lpow = checked_prime_power(ell, level + 1).ok_or(Error::ModulusTooLarge {
            ell,
            prec: level + 1,
        })?;
        let size = lpow / ell;
        let mut teich = vec![0u64; ell as usize];
        let mut teich_inv = vec![0u64; ell as usize];
        for a in 1..ell {
            let mut w = a;
            for _ in 0..=level {
                w = pow_mod(w, ell, lpow);
            }
            teich[a as usize] = w;
            teich_inv[a as usize] = inv_mod(w, lpow).unwrap();
        }
        let mut dlog = vec![0u32; size as usize];
        let mut x = 1u64;
        for t in 0..size {
            dlog[((x - 1) / ell) as usize] = t as u32;
            x = mul_mod(x, 1 + ell, lpow);
        }
        Ok(LevelSplit {
            ell,
            f_prime,
            lpow,
            size,
            teich,
            teich_inv,
            dlog,
        })
    }

    fn gamma_exponent(&self, u: u64) -> u64 {
        let ul = u % self.lpow;
        let x = mul_mod(ul, self.teich_inv[(ul % self.ell) as usize], self.lpow);
        self.dlog[((x - 1) / self.ell) as usize] as u64
    }

    fn residue(&self, delta_rep: u64, t: u64) -> u64 {
        let w = self.teich[(delta_rep % self.ell) as usize];
        let g = pow_mod(1 + self.ell, t, self.lpow);
        crt(
            delta_rep % self.f_prime.max(1),
            self.f_prime,
            mul_mod(w, g, self.lpow),
            self.lpow,
        )
    }
}

/// Element of the truncated algebra Z/l^A[Delta][[T]] / (T, l)^N.
#[derive(Clone)]
pub struct IwasawaElement {
    ctx: TowerContext,
    precision: u32,
    exact: bool,
    // coeffs[k][i]: coefficient of T^k at the i-th element of Delta
    coeffs: Vec<Vec<u64>>,
}

fn prime_power(ell: u64, k: u32) -> u64 {
    checked_prime_power(ell, k).unwrap()
}

impl IwasawaElement {
    /// Build from raw residues; data is reduced to the quotient described by
    /// (precision, exact).
    pub fn from_raw(
        ctx: &TowerContext,
        coeffs: Vec<Vec<u64>>,
        precision: u32,
        exact: bool,
    ) -> Result<Self> {
        let n = ctx.truncation();
        let nd = ctx.nd();
        if coeffs.len() > n || coeffs.iter().any(|c| c.len() != nd) {
            return Err(Error::Invalid(format!(
                "expected at most {} rows of {} coefficients",
                n, nd
            )));
        }
        if precision == 0 || precision > ctx.precision() {
            return Err(Error::Invalid(format!(
                "precision must lie in 1..={}",
                ctx.precision()
            )));
        }
        let mut coeffs = coeffs;
        coeffs.resize(n, vec![0; nd]);
        let mut out = IwasawaElement {
            ctx: ctx.clone(),
            precision,
            exact,
            coeffs,
        };
        out.normalize();
        Ok(out)
    }

    fn blank(ctx: &TowerContext, precision: u32, exact: bool) -> Self {
        IwasawaElement {
            ctx: ctx.clone(),
            precision,
            exact,
            coeffs: vec![vec![0; ctx.nd()]; ctx.truncation()],
        }
    }

    pub fn zero(ctx: &TowerContext) -> Self {
        Self::blank(ctx, ctx.precision(), true)
    }

    pub fn one(ctx: &TowerContext) -> Self {
        let mut out = Self::zero(ctx);
        out.coeffs[0][ctx.0.identity] = 1;
        out
    }

    /// A constant from a group-ring element over Delta.
    pub fn constant(ctx: &TowerContext, a: &AdicElement) -> Result<Self> {
        if a.field() != ctx.delta_field() {
            return Err(Error::FieldMismatch);
        }
        let precision = a.ring().precision.min(ctx.precision());
        let mut out = Self::blank(ctx, precision, true);
        for (r, c) in a.terms() {
            out.coeffs[0][ctx.delta_field().index_of(r)] = c.value();
        }
        out.normalize();
        Ok(out)
    }

    /// T = gamma - 1.
    pub fn gamma_minus_one(ctx: &TowerContext) -> Self {
        let mut out = Self::zero(ctx);
        if ctx.truncation() > 1 {
            out.coeffs[1][ctx.0.identity] = 1;
        } else {
            out.exact = false;
        }
        out
    }

    pub fn context(&self) -> &TowerContext {
        &self.ctx
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Precision to which the coefficient of T^k is known.
    pub fn coefficient_precision(&self, k: usize) -> u32 {
        if self.exact {
            self.precision
        } else {
            self.precision.min((self.ctx.truncation() - k) as u32)
        }
    }

    pub fn raw(&self) -> &[Vec<u64>] {
        &self.coeffs
    }

    /// Coefficient of T^k as an element of Z/l^p[Delta].
    pub fn coefficient(&self, k: usize) -> AdicElement {
        let ring = self.ctx.ring().coarsen(self.coefficient_precision(k));
        let delta = self.ctx.delta_field();
        let mut out = AdicElement::adic_zero(delta, &ring);
        for (i, &x) in self.coeffs[k].iter().enumerate() {
            out.add_term(delta.reps()[i], ring.from_u64(x));
        }
        out
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .rposition(|row| row.iter().any(|&x| x != 0))
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    fn normalize(&mut self) {
        let ell = self.ctx.ell();
        for k in 0..self.coeffs.len() {
            let m = prime_power(ell, self.coefficient_precision(k));
            for x in self.coeffs[k].iter_mut() {
                *x %= m;
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ctx.same(&other.ctx) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Reduce to a coarser quotient.
    pub fn coarsen(&self, precision: u32, exact: bool) -> Self {
        let mut out = self.clone();
        out.precision = self.precision.min(precision);
        out.exact = self.exact && exact;
        out.normalize();
        out
    }

    fn common(&self, other: &Self) -> (u32, bool) {
        (
            self.precision.min(other.precision),
            self.exact && other.exact,
        )
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let (p, e) = self.common(other);
        let modulus = self.ctx.modulus();
        let mut out = Self::blank(&self.ctx, p, e);
        for k in 0..out.coeffs.len() {
            for i in 0..out.coeffs[k].len() {
                out.coeffs[k][i] = ((self.coeffs[k][i] as u128 + other.coeffs[k][i] as u128)
                    % modulus as u128) as u64;
            }
        }
        out.normalize();
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let modulus = self.ctx.modulus();
        let mut out = self.clone();
        for row in out.coeffs.iter_mut() {
            for x in row.iter_mut() {
                *x = (modulus - *x) % modulus;
            }
        }
        out.normalize();
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    fn delta_mul(&self, a: &[u64], b: &[u64], acc: &mut [u64]) {
        let nd = a.len();
        let modulus = self.ctx.modulus();
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let idx = self.ctx.0.mul[i * nd + j] as usize;
                acc[idx] =
                    ((acc[idx] as u128 + mul_mod(x, y, modulus) as u128) % modulus as u128) as u64;
            }
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let (p, mut e) = self.common(other);
        let n = self.ctx.truncation();
        if e {
            let d1 = self.degree().unwrap_or(0);
            let d2 = other.degree().unwrap_or(0);
            if d1 + d2 >= n && !(self.is_zero() || other.is_zero()) {
                e = false;
            }
        }
        let mut out = Self::blank(&self.ctx, p, e);
        for k in 0..n {
            for j in 0..n - k {
                let mut acc = std::mem::take(&mut out.coeffs[k + j]);
                self.delta_mul(&self.coeffs[k], &other.coeffs[j], &mut acc);
                out.coeffs[k + j] = acc;
            }
        }
        out.normalize();
        Ok(out)
    }

    // sum_k b_k s^k for a scalar series s with s(0) = 0 mod l
    fn substitute(&self, coeffs: &[Vec<u64>], s: &[u64], exact: bool) -> Self {
        let n = self.ctx.truncation();
        let nd = self.ctx.nd();
        let modulus = self.ctx.modulus();
        let mut acc = vec![vec![0u64; nd]; n];
        for k in (0..n).rev() {
            // acc = acc * s + coeffs[k]
            let mut next = vec![vec![0u64; nd]; n];
            for (a, row) in acc.iter().enumerate() {
                if row.iter().all(|&x| x == 0) {
                    continue;
                }
                for (b, &sb) in s.iter().enumerate().take(n - a) {
                    if sb == 0 {
                        continue;
                    }
                    for i in 0..nd {
                        let t = mul_mod(row[i], sb, modulus);
                        next[a + b][i] =
                            ((next[a + b][i] as u128 + t as u128) % modulus as u128) as u64;
                    }
                }
            }
            for i in 0..nd {
                next[0][i] = ((next[0][i] as u128 + coeffs[k][i] as u128) % modulus as u128) as u64;
            }
            acc = next;
        }
        let mut out = IwasawaElement {
            ctx: self.ctx.clone(),
            precision: self.precision,
            exact,
            coeffs: acc,
        };
        out.normalize();
        out
    }

    /// The involution sigma -> kappa(sigma) sigma^{-1}, with
    /// T -> kappa(gamma)(1 + T)^{-1} - 1.
    pub fn mirror(&self) -> Self {
        let n = self.ctx.truncation();
        let modulus = self.ctx.modulus();
        let ell = self.ctx.ell();
        let data = &self.ctx.0;
        let starred: Vec<Vec<u64>> = self
            .coeffs
            .iter()
            .map(|row| {
                let mut out = vec![0u64; row.len()];
                for (i, &x) in row.iter().enumerate() {
                    out[data.inv[i] as usize] = mul_mod(x, data.kappa[i], modulus);
                }
                out
            })
            .collect();
        // (1 + l) sum_j (-T)^j - 1
        let s: Vec<u64> = (0..n)
            .map(|j| {
                if j == 0 {
                    ell % modulus
                } else if j % 2 == 0 {
                    (1 + ell) % modulus
                } else {
                    (modulus - (1 + ell) % modulus) % modulus
                }
            })
            .collect();
        let exact = self.exact && self.degree().unwrap_or(0) == 0;
        self.substitute(&starred, &s, exact)
    }

    /// The i-th Tate twist: sigma -> kappa(sigma)^i sigma, T -> kappa(gamma)^i (1 + T) - 1.
    pub fn tate_twist(&self, i: i64) -> Self {
        let n = self.ctx.truncation();
        let modulus = self.ctx.modulus();
        let data = &self.ctx.0;
        let pow_signed = |x: u64| -> u64 {
            if i >= 0 {
                pow_mod(x, i as u64, modulus)
            } else {
                pow_mod(inv_mod(x, modulus).unwrap(), i.unsigned_abs(), modulus)
            }
        };
        let twisted: Vec<Vec<u64>> = self
            .coeffs
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(k, &x)| mul_mod(x, pow_signed(data.kappa[k]), modulus))
                    .collect()
            })
            .collect();
        let u = pow_signed(1 + self.ctx.ell());
        let mut s = vec![0u64; n];
        s[0] = (u + modulus - 1) % modulus;
        if n > 1 {
            s[1] = u;
        }
        self.substitute(&twisted, &s, self.exact)
    }

    /// Phi + mirror(Phi).
    pub fn symmetrize(&self) -> Self {
        self.add(&self.mirror()).expect("same context")
    }

    /// Equality in the coarser of the two quotients.
    pub fn agrees(&self, other: &Self) -> bool {
        if !self.ctx.same(&other.ctx) {
            return false;
        }
        let (p, e) = self.common(other);
        self.coarsen(p, e).coeffs == other.coarsen(p, e).coeffs
    }

    /// Reduce modulo gamma^{l^{m+n}} - 1 onto the group basis of G_{F_n}.
    pub fn reduce_mod_level(&self, n: u32) -> Result<AdicElement> {
        let level = self.reduce_data(n)?;
        level.to_element(&self.ctx, n)
    }

    fn reduce_data(&self, n: u32) -> Result<LevelData> {
        let ctx = &self.ctx;
        let ell = ctx.ell();
        let level = ctx.offset() + n;
        let modulus = ctx.modulus();
        let trunc = ctx.truncation();
        let d = checked_prime_power(ell, level).ok_or(Error::TruncationTooCoarse(n))? as usize;
        let top = self.degree().unwrap_or(0);
        // powers T^a mod omega_L for a <= max(N, top)
        let upto = if self.exact { top } else { trunc };
        let omega: Vec<u64> = binomial_row(d as u64, d, modulus);
        let mut power: Vec<u64> = vec![0; d];
        let mut valuations = Vec::with_capacity(upto + 1);
        let mut remainder = vec![vec![0u64; ctx.nd()]; d];
        for a in 0..=upto {
            if a < d {
                power = vec![0; d];
                power[a] = 1;
            } else {
                // multiply by T and reduce with T^d = -sum_{1<=j<d} C(d, j) T^j
                let carry = power[d - 1];
                for j in (1..d).rev() {
                    power[j] = power[j - 1];
                }
                power[0] = 0;
                if carry != 0 {
                    for j in 1..d {
                        let t = mul_mod(carry, omega[j], modulus);
                        power[j] = (power[j] + modulus - t) % modulus;
                    }
                }
            }
            valuations.push(
                power
                    .iter()
                    .filter(|&&x| x != 0)
                    .map(|&x| val_u64(x, ell))
                    .min()
                    .unwrap_or(ctx.precision()),
            );
            if a < trunc {
                for (j, &pj) in power.iter().enumerate() {
                    if pj == 0 {
                        continue;
                    }
                    for (i, &x) in self.coeffs[a].iter().enumerate() {
                        if x != 0 {
                            let t = mul_mod(pj, x, modulus);
                            remainder[j][i] =
                                ((remainder[j][i] as u128 + t as u128) % modulus as u128) as u64;
                        }
                    }
                }
            }
        }
        let precision = if self.exact {
            self.precision
        } else {
            let mut p = self.precision;
            for (a, &v) in valuations.iter().enumerate() {
                p = p.min((trunc - a) as u32 + v);
            }
            p
        };
        if precision == 0 {
            return Err(Error::TruncationTooCoarse(n));
        }
        // T^j = sum_t C(j, t) (-1)^{j - t} gamma^t
        let jmax = d.min(remainder.len());
        let mut data = vec![vec![0u64; d]; ctx.nd()];
        let mut row = vec![0u64; jmax + 1];
        row[0] = 1;
        for j in 0..jmax {
            // row = C(j, .)
            if j > 0 {
                for t in (1..=j).rev() {
                    row[t] = (row[t] + row[t - 1]) % modulus;
                }
            }
            for (i, &x) in remainder[j].iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for t in 0..=j {
                    let mut c = mul_mod(row[t], x, modulus);
                    if (j - t) % 2 == 1 {
                        c = (modulus - c) % modulus;
                    }
                    data[i][t] = (data[i][t] + c) % modulus;
                }
            }
        }
        let m = prime_power(ell, precision);
        for r in data.iter_mut() {
            for x in r.iter_mut() {
                *x %= m;
            }
        }
        Ok(LevelData {
            level,
            precision,
            data,
        })
    }
}

/// C(d, j) mod modulus for j < len.
fn binomial_row(d: u64, len: usize, modulus: u64) -> Vec<u64> {
    // multiplicative formula over Z would overflow; use Pascal on demand
    let mut row = vec![0u64; len];
    if len == 0 {
        return row;
    }
    row[0] = 1 % modulus;
    let mut cur = vec![1 % modulus];
    for _ in 0..d {
        let mut next = vec![0u64; (cur.len() + 1).min(len)];
        for (j, slot) in next.iter_mut().enumerate() {
            let a = if j < cur.len() { cur[j] } else { 0 };
            let b = if j >= 1 && j - 1 < cur.len() {
                cur[j - 1]
            } else {
                0
            };
            *slot = (a + b) % modulus;
        }
        cur = next;
    }
    row[..cur.len()].copy_from_slice(&cur);
    row
}

impl PartialEq for IwasawaElement {
    fn eq(&self, other: &Self) -> bool {
        self.agrees(other)
    }
}

impl fmt::Debug for IwasawaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Iwasawa(A={}, exact={}, {:?})",
            self.precision, self.exact, self.coeffs
        )
    }
}

impl fmt::Display for IwasawaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for k in 0..self.coeffs.len() {
            let c = self.coefficient(k);
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{}] T^{}", c, k)?;
        }
        if first {
            write!(f, "0")?;
        }
        if !self.exact {
            write!(
                f,
                " + O(l^{}, (l, T)^{})",
                self.precision,
                self.ctx.truncation()
            )?;
        }
        Ok(())
    }
}

/// Group-ring data at absolute level L, indexed [delta][t] with t mod l^L.
#[derive(Debug, Clone, PartialEq, Eq)]
struct LevelData {
    level: u32,
    precision: u32,
    data: Vec<Vec<u64>>,
}

impl LevelData {
    fn to_element(&self, ctx: &TowerContext, n: u32) -> Result<AdicElement> {
        let field = ctx.level_field(n)?;
        let split = LevelSplit::new(ctx.ell(), ctx.0.f_prime, self.level)?;
        let ring = ctx.ring().coarsen(self.precision);
        let mut out = AdicElement::adic_zero(&field, &ring);
        let reps = ctx.delta_field().reps();
        for (i, row) in self.data.iter().enumerate() {
            for (t, &x) in row.iter().enumerate() {
                if x != 0 {
                    let r = split.residue(reps[i], t as u64);
                    out.add_term(field.canonical(r), ring.from_u64(x));
                }
            }
        }
        Ok(out)
    }
}

/// Integer coefficients of the twisted element at absolute level L, binned
/// as a[delta][t].
fn level_coefficients(ctx: &TowerContext, c: i64, level: u32) -> Result<Vec<Vec<i64>>> {
    let ell = ctx.ell();
    let fp = ctx.0.f_prime;
    let split = LevelSplit::new(ell, fp, level)?;
    let f = fp * split.lpow;
    check_twist(f, c)?;
    let delta = ctx.delta_field();
    let nd = delta.degree();
    let size = split.size as usize;
    let mut a = vec![vec![0i64; size]; nd];
    let cinv = inv_mod(crate::arith::reduce_mod(c, f), f).unwrap();
    let base = (c - 1) / 2;
    let dmod = delta.conductor();
    for b in 1..f {
        if gcd(b, f) != 1 {
            continue;
        }
        let ab = mul_mod(b, cinv, f) as i128;
        let coeff = base - (c as i128 * ab).div_euclid(f as i128) as i64;
        // coefficient sits at sigma_b^{-1}
        let i = delta.index_of(b % dmod);
        let t = split.gamma_exponent(b);
        let inv_i = ctx.0.inv[i] as usize;
        let inv_t = (split.size - t) % split.size;
        a[inv_i][inv_t as usize] += coeff;
    }
    Ok(a)
}

fn precision_for_level(ell: u64, level: u32, trunc: usize, max: u32) -> u32 {
    let mut a = max;
    for k in 1..trunc {
        let v = val_u64(k as u64, ell);
        let bound = level as i64 - v as i64;
        if bound < (trunc - k) as i64 {
            a = a.min(bound.max(0) as u32);
        }
    }
    a
}

/// Lift of the level-L data to Z_l[Delta][[T]] via gamma^t = (1 + T)^t.
fn expand_level(
    ctx: &TowerContext,
    a: &[Vec<i64>],
    precision: u32,
    exact: bool,
) -> Result<IwasawaElement> {
    let modulus = ctx.modulus();
    let trunc = ctx.truncation();
    let nd = ctx.nd();
    let mut coeffs = vec![vec![0u64; nd]; trunc];
    let size = a.first().map_or(1, |r| r.len());
    let mut row = vec![0u64; trunc];
    row[0] = 1 % modulus;
    for t in 0..size {
        if t > 0 {
            for k in (1..trunc).rev() {
                row[k] = (row[k] + row[k - 1]) % modulus;
            }
        }
        for i in 0..nd {
            let x = a[i][t];
            if x == 0 {
                continue;
            }
            let xm = crate::arith::reduce_mod(x, modulus);
            for k in 0..trunc.min(t + 1) {
                if row[k] != 0 {
                    let v = mul_mod(xm, row[k], modulus);
                    coeffs[k][i] = ((coeffs[k][i] as u128 + v as u128) % modulus as u128) as u64;
                }
            }
        }
    }
    IwasawaElement::from_raw(ctx, coeffs, precision, exact)
}

fn project(a: &[Vec<i64>], size: usize) -> Vec<Vec<i64>> {
    a.iter()
        .map(|row| {
            let mut out = vec![0i64; size];
            for (t, &x) in row.iter().enumerate() {
                out[t % size] += x;
            }
            out
        })
        .collect()
}

/// The twisted Stickelberger element of F_n lifted to the Iwasawa algebra.
/// Exact when l^{m+n} <= N; otherwise it is the limit element modulo
/// l^A + (l, T)^N for the largest A this level supports.
pub fn coherent_stickelberger(ctx: &TowerContext, c: i64, n: u32) -> Result<IwasawaElement> {
    let level = ctx.offset() + n;
    let ell = ctx.ell();
    let a = level_coefficients(ctx, c, level)?;
    if level > 0 {
        let below = level_coefficients(ctx, c, level - 1)?;
        if project(&a, (ell.pow(level - 1)) as usize) != below {
            return Err(Error::CoherenceFailure(level, level - 1));
        }
    }
    let size = ell.pow(level) as usize;
    if size <= ctx.truncation() {
        expand_level(ctx, &a, ctx.precision(), true)
    } else {
        let precision = precision_for_level(ell, level, ctx.truncation(), ctx.precision());
        if precision == 0 {
            return Err(Error::TruncationTooCoarse(n));
        }
        expand_level(ctx, &a, precision, false)
    }
}

/// The limit element sigma^c of F_infinity modulo l^A + (l, T)^N, with A as
/// large as the work budget allows (at most M).
pub fn limit_stickelberger(ctx: &TowerContext, c: i64) -> Result<IwasawaElement> {
    let ell = ctx.ell();
    let nd = ctx.nd() as u64;
    let mut level = ctx.offset();
    loop {
        let a = precision_for_level(ell, level, ctx.truncation(), ctx.precision());
        let next_cost = ell.checked_pow(level + 1).map(|x| x.saturating_mul(nd));
        if a == ctx.precision() || next_cost.is_none_or(|x| x > LEVEL_BUDGET) {
            if a == 0 {
                return Err(Error::TruncationTooCoarse(level - ctx.offset()));
            }
            let data = level_coefficients(ctx, c, level)?;
            return expand_level(ctx, &data, a, false);
        }
        level += 1;
    }
}

/// Reflection at a finite level: x_g -> x_g kappa(g) g^{-1}, kappa read mod l^{L+1}.
pub fn level_mirror(ctx: &TowerContext, x: &AdicElement, n: u32) -> Result<AdicElement> {
    let level = ctx.offset() + n;
    let field = ctx.level_field(n)?;
    if x.field() != &field {
        return Err(Error::FieldMismatch);
    }
    let precision = x.ring().precision.min(level + 1);
    let ring = ctx.ring().coarsen(precision);
    let lpow = prime_power(ctx.ell(), level + 1);
    let mut out = AdicElement::adic_zero(&field, &ring);
    for (r, c) in x.terms() {
        let kappa = ring.from_u64(r % lpow);
        out.add_term(field.inv_rep(r), c.reduce_to(ring.modulus()).mul(&kappa));
    }
    Ok(out)
}

/// reduce(mirror(Phi)) against level_mirror(reduce(Phi)).
#[derive(Debug, Clone, PartialEq)]
pub struct MirrorDiagnostic {
    pub mirror_then_reduce: AdicElement,
    pub reduce_then_reflect: AdicElement,
    /// Precision at which the two are compared.
    pub precision: u32,
    pub congruent: bool,
}

pub fn mirror_diagnostic(phi: &IwasawaElement, n: u32) -> Result<MirrorDiagnostic> {
    let ctx = phi.context();
    let a = phi.mirror().reduce_mod_level(n)?;
    let b = level_mirror(ctx, &phi.reduce_mod_level(n)?, n)?;
    let precision = a.ring().precision.min(b.ring().precision);
    let congruent = a.coarsen(precision) == b.coarsen(precision);
    Ok(MirrorDiagnostic {
        mirror_then_reduce: a,
        reduce_then_reflect: b,
        precision,
        congruent,
    })
}

/// l-valuation of the index of the ideal generated by the reduced elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexReport {
    pub valuation: Option<u64>,
    pub certified: bool,
    pub precision: u32,
}

/// Index in Z_l[G_{F_n}] of the ideal generated by the level-n reductions of
/// the i-th Tate twists of the symmetrized limit elements, for c in `twists`.
pub fn ideal_index(ctx: &TowerContext, n: u32, twists: &[i64], i: i64) -> Result<IndexReport> {
    if twists.is_empty() {
        return Ok(IndexReport {
            valuation: None,
            certified: false,
            precision: 0,
        });
    }
    let mut reduced = Vec::new();
    for &c in twists {
        let phi = limit_stickelberger(ctx, c)?.symmetrize().tate_twist(i);
        reduced.push(phi.reduce_data(n)?);
    }
    let precision = reduced.iter().map(|r| r.precision).min().unwrap();
    let ell = ctx.ell();
    let nd = ctx.nd();
    let size = ell.pow(ctx.offset() + n) as usize;
    let cols = nd * size;
    let modp = prime_power(ell, precision);
    let mul = &ctx.0.mul;
    let mut rows = Vec::with_capacity(cols * reduced.len());
    for r in &reduced {
        for gd in 0..nd {
            for gt in 0..size {
                let mut row = vec![0u64; cols];
                for (i, line) in r.data.iter().enumerate() {
                    for (t, &x) in line.iter().enumerate() {
                        if x == 0 {
                            continue;
                        }
                        let di = mul[gd * nd + i] as usize;
                        let ti = (gt + t) % size;
                        row[di * size + ti] = x % modp;
                    }
                }
                rows.push(row);
            }
        }
    }
    let nf = local_normal_form(&rows, ell, precision)?;
    let valuation = nf.index_valuation();
    Ok(IndexReport {
        valuation,
        certified: valuation.is_some(),
        precision,
    })
}
