//! Abelian number fields presented as fixed fields inside Q(zeta_f).

mod characters;
mod group_ring;
mod idempotent;

pub use characters::{CharacterGroup, DirichletCharacter};
pub use group_ring::{AdicElement, Coefficient, GroupRingElement, RationalElement};
pub use idempotent::{character_classes, class_idempotent, minus_idempotent, plus_idempotent};

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use crate::arith::{factor, gcd, reduce_mod};
use crate::error::{Error, Result};

const NO_INDEX: u32 = u32::MAX;

struct FieldData {
    f: u64,
    kernel: Vec<u64>,
    reps: Vec<u64>,
    // residue mod f -> index of its class in `reps`, NO_INDEX for non-units
    class_of: Vec<u32>,
    inverse: Vec<u32>,
    chars: OnceLock<CharacterGroup>,
}

/// The fixed field of a subgroup H of (Z/fZ)^x, with f its exact conductor.
#[derive(Clone)]
pub struct AbelianField(Arc<FieldData>);

/// An element of Gal(F/Q), identified by its smallest non-negative representative.
#[derive(Clone)]
pub struct GaloisElement {
    field: AbelianField,
    rep: u64,
}

/// Units modulo f, sorted.
pub fn units_mod(f: u64) -> Vec<u64> {
    if f == 1 {
        return vec![0];
    }
    (1..f).filter(|&a| gcd(a, f) == 1).collect()
}

/// The subgroup of (Z/fZ)^x generated by `gens`, sorted.
pub fn subgroup_closure(f: u64, gens: &[u64]) -> Vec<u64> {
    let one = 1 % f;
    let mut set: BTreeSet<u64> = BTreeSet::from([one]);
    let mut frontier = vec![one];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = (x as u128 * g as u128 % f as u128) as u64;
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set.into_iter().collect()
}

fn contains_kernel_to(f: u64, h: &BTreeSet<u64>, d: u64) -> bool {
    // does H contain every unit a with a = 1 mod d ?
    let mut a = 1 % f;
    loop {
        if gcd(a, f) == 1 && !h.contains(&a) {
            return false;
        }
        a += d;
        if a >= f {
            return true;
        }
    }
}

/// Exact conductor of the fixed field of the subgroup `h` (closed) of (Z/fZ)^x.
pub fn conductor_of(f: u64, h: &[u64]) -> u64 {
    let set: BTreeSet<u64> = h.iter().copied().collect();
    let mut d = f;
    loop {
        let mut shrunk = false;
        for (p, _) in factor(d) {
            if contains_kernel_to(f, &set, d / p) {
                d /= p;
                shrunk = true;
                break;
            }
        }
        if !shrunk {
            break;
        }
    }
    if d % 4 == 2 {
        d /= 2;
    }
    d
}

impl AbelianField {
    /// The fixed field of the subgroup generated by `gens`; f must be its exact conductor.
    pub fn new(f: u64, gens: &[i64]) -> Result<Self> {
        if f == 0 {
            return Err(Error::Invalid("conductor must be positive".into()));
        }
        if f % 4 == 2 {
            return Err(Error::ConductorTwoModFour(f));
        }
        let gens = Self::check_units(f, gens)?;
        let h = subgroup_closure(f, &gens);
        let actual = conductor_of(f, &h);
        if actual != f {
            return Err(Error::InexactConductor { given: f, actual });
        }
        Ok(Self::build(f, h))
    }

    /// Q(zeta_f) (f = 2 mod 4 is read as f/2).
    pub fn cyclotomic(f: u64) -> Self {
        let f = if f % 4 == 2 { f / 2 } else { f };
        Self::build(f, vec![1 % f])
    }

    /// Q itself.
    pub fn rationals() -> Self {
        Self::cyclotomic(1)
    }

    /// The fixed field of the subgroup generated by `gens` in (Z/mZ)^x, for any
    /// modulus m; the result is presented at its exact conductor.
    pub fn fixed_field(m: u64, gens: &[i64]) -> Result<Self> {
        let gens = Self::check_units(m, gens)?;
        let h = subgroup_closure(m, &gens);
        let d = conductor_of(m, &h);
        let mut hd: Vec<u64> = h.iter().map(|&x| x % d).collect();
        hd.sort_unstable();
        hd.dedup();
        Ok(Self::build(d, subgroup_closure(d, &hd)))
    }

    fn check_units(f: u64, gens: &[i64]) -> Result<Vec<u64>> {
        gens.iter()
            .map(|&g| {
                let r = reduce_mod(g, f);
                if gcd(r, f) != 1 {
                    Err(Error::NotCoprime {
                        value: g,
                        modulus: f,
                    })
                } else {
                    Ok(r)
                }
            })
            .collect()
    }

    fn build(f: u64, kernel: Vec<u64>) -> Self {
        let units = units_mod(f);
        let mut class_of = vec![NO_INDEX; f as usize];
        let mut reps = Vec::new();
        for &a in &units {
            if class_of[a as usize] != NO_INDEX {
                continue;
            }
            let idx = reps.len() as u32;
            reps.push(a);
            for &h in &kernel {
                let b = (a as u128 * h as u128 % f as u128) as usize;
                class_of[b] = idx;
            }
        }
        let inverse = reps
            .iter()
            .map(|&r| {
                let inv = crate::arith::inv_mod(r, f).unwrap();
                class_of[inv as usize]
            })
            .collect();
        AbelianField(Arc::new(FieldData {
            f,
            kernel,
            reps,
            class_of,
            inverse,
            chars: OnceLock::new(),
        }))
    }

    pub fn conductor(&self) -> u64 {
        self.0.f
    }

    /// The full kernel subgroup H, sorted.
    pub fn kernel(&self) -> &[u64] {
        &self.0.kernel
    }

    /// A small generating set of H.
    pub fn kernel_generators(&self) -> Vec<u64> {
        let f = self.conductor();
        let mut gens = Vec::new();
        let mut span: BTreeSet<u64> = BTreeSet::from([1 % f]);
        for &h in self.kernel() {
            if !span.contains(&h) {
                gens.push(h);
                span = subgroup_closure(f, &gens).into_iter().collect();
            }
        }
        gens
    }

    /// |Gal(F/Q)|.
    pub fn degree(&self) -> usize {
        self.0.reps.len()
    }

    /// Canonical representatives of the Galois group, sorted.
    pub fn reps(&self) -> &[u64] {
        &self.0.reps
    }

    pub fn elements(&self) -> impl Iterator<Item = GaloisElement> + '_ {
        self.0.reps.iter().map(move |&rep| GaloisElement {
            field: self.clone(),
            rep,
        })
    }

    pub fn identity(&self) -> GaloisElement {
        self.element_unchecked(1 % self.conductor())
    }

    pub(crate) fn element_unchecked(&self, rep: u64) -> GaloisElement {
        GaloisElement {
            field: self.clone(),
            rep,
        }
    }

    /// Index of the class of a unit residue.
    pub(crate) fn index_of(&self, residue: u64) -> usize {
        let i = self.0.class_of[(residue % self.conductor()) as usize];
        debug_assert_ne!(i, NO_INDEX);
        i as usize
    }

    /// Canonical representative of the class of a unit residue.
    pub fn canonical(&self, residue: u64) -> u64 {
        self.0.reps[self.index_of(residue)]
    }

    pub(crate) fn mul_reps(&self, a: u64, b: u64) -> u64 {
        let f = self.conductor();
        self.canonical((a as u128 * b as u128 % f as u128) as u64)
    }

    pub(crate) fn inv_rep(&self, a: u64) -> u64 {
        self.0.reps[self.0.inverse[self.index_of(a)] as usize]
    }

    /// The Artin symbol of a, the class of a in (Z/fZ)^x / H.
    pub fn artin(&self, a: i64) -> Result<GaloisElement> {
        let f = self.conductor();
        let r = reduce_mod(a, f);
        if gcd(r, f) != 1 {
            return Err(Error::NotCoprime {
                value: a,
                modulus: f,
            });
        }
        Ok(self.element_unchecked(self.canonical(r)))
    }

    /// Complex conjugation, the class of -1.
    pub fn conjugation(&self) -> GaloisElement {
        self.artin(-1).unwrap()
    }

    pub fn is_imaginary(&self) -> bool {
        let f = self.conductor();
        f > 2 && self.canonical(f - 1) != self.canonical(1)
    }

    pub fn is_rationals(&self) -> bool {
        self.degree() == 1
    }

    /// Whether `k` is a subfield of `self`.
    pub fn contains(&self, k: &AbelianField) -> bool {
        let (f, fk) = (self.conductor(), k.conductor());
        if f % fk != 0 {
            return false;
        }
        let hk: BTreeSet<u64> = k.kernel().iter().copied().collect();
        self.kernel().iter().all(|h| hk.contains(&(h % fk)))
    }

    /// The natural surjection Gal(F/Q) -> Gal(K/Q).
    pub fn restrict(&self, k: &AbelianField, g: &GaloisElement) -> Result<GaloisElement> {
        if g.field != *self {
            return Err(Error::FieldMismatch);
        }
        if !self.contains(k) {
            return Err(Error::NotSubfield {
                f: self.conductor(),
                sub_f: k.conductor(),
            });
        }
        Ok(k.element_unchecked(k.canonical(g.rep % k.conductor())))
    }

    /// Subfield fixed by the subgroup of Gal(F/Q) generated by the given residues.
    pub fn fixed_subfield(&self, gens: &[u64]) -> AbelianField {
        let mut all: Vec<i64> = self.kernel_generators().iter().map(|&x| x as i64).collect();
        all.extend(gens.iter().map(|&x| x as i64));
        Self::fixed_field(self.conductor(), &all).unwrap()
    }

    /// Every subfield of F (including Q and F), each at its exact conductor,
    /// sorted by (conductor, kernel).
    pub fn subfields(&self) -> Vec<AbelianField> {
        let f = self.conductor();
        let base = self.kernel_generators();
        let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
        let mut groups: Vec<Vec<u64>> = Vec::new();
        let push = |g: Vec<u64>, seen: &mut BTreeSet<Vec<u64>>, groups: &mut Vec<Vec<u64>>| {
            if seen.insert(g.clone()) {
                groups.push(g);
            }
        };
        push(self.kernel().to_vec(), &mut seen, &mut groups);
        for &r in self.reps() {
            let mut gens = base.clone();
            gens.push(r);
            push(subgroup_closure(f, &gens), &mut seen, &mut groups);
        }
        // joins of pairs until closed
        let mut i = 0;
        while i < groups.len() {
            for j in 0..i {
                let mut gens = groups[i].clone();
                gens.extend_from_slice(&groups[j]);
                gens.sort_unstable();
                gens.dedup();
                let joined = subgroup_closure(f, &gens);
                push(joined, &mut seen, &mut groups);
            }
            i += 1;
        }
        let mut fields: Vec<AbelianField> = groups
            .iter()
            .map(|h| {
                let d = conductor_of(f, h);
                let mut hd: Vec<u64> = h.iter().map(|&x| x % d).collect();
                hd.sort_unstable();
                hd.dedup();
                Self::build(d, subgroup_closure(d, &hd))
            })
            .collect();
        fields.sort_by(|a, b| (a.conductor(), a.kernel()).cmp(&(b.conductor(), b.kernel())));
        fields.dedup();
        fields
    }

    /// The largest subfield of F in which p splits completely.
    pub fn decomposition_field(&self, p: u64) -> AbelianField {
        let f = self.conductor();
        let mut pa = 1;
        while f.is_multiple_of(pa * p) {
            pa *= p;
        }
        let rest = f / pa;
        let mut gens = Vec::new();
        // Frobenius: p mod rest, 1 mod p^a
        if rest > 1 {
            gens.push(crt(p % rest, rest, 1 % pa, pa));
        }
        // inertia: (Z/p^a)^x embedded as 1 mod rest
        if pa > 1 {
            for u in units_mod(pa) {
                gens.push(crt(1 % rest, rest, u, pa));
            }
        }
        self.fixed_subfield(&gens)
    }

    pub(crate) fn characters_cache(&self) -> &CharacterGroup {
        self.0
            .chars
            .get_or_init(|| CharacterGroup::new(self.clone()))
    }
}

/// The residue mod m*n congruent to a mod m and b mod n (m, n coprime).
pub fn crt(a: u64, m: u64, b: u64, n: u64) -> u64 {
    if m == 1 {
        return b % n;
    }
    if n == 1 {
        return a % m;
    }
    let inv = crate::arith::inv_mod(m % n, n).unwrap();
    let t =
        ((b as i128 - a as i128).rem_euclid(n as i128) as u128 * inv as u128 % n as u128) as u64;
    a + m * t
}

impl PartialEq for AbelianField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.f == other.0.f && self.0.kernel == other.0.kernel)
    }
}

impl Eq for AbelianField {}

impl Hash for AbelianField {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.f.hash(state);
        self.0.kernel.hash(state);
    }
}

impl fmt::Debug for AbelianField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "AbelianField(f={}, H={:?})",
            self.0.f,
            self.kernel_generators()
        )
    }
}

impl fmt::Display for AbelianField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.kernel.len() == 1 {
            write!(f, "Q(zeta_{})", self.0.f)
        } else {
            write!(f, "Q(zeta_{})^<{:?}>", self.0.f, self.kernel_generators())
        }
    }
}

impl GaloisElement {
    pub fn field(&self) -> &AbelianField {
        &self.field
    }

    pub fn rep(&self) -> u64 {
        self.rep
    }

    pub fn mul(&self, other: &GaloisElement) -> GaloisElement {
        assert!(
            self.field == other.field,
            "Galois elements from different fields"
        );
        self.field
            .element_unchecked(self.field.mul_reps(self.rep, other.rep))
    }

    pub fn inverse(&self) -> GaloisElement {
        self.field.element_unchecked(self.field.inv_rep(self.rep))
    }

    pub fn pow(&self, e: i64) -> GaloisElement {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = self.field.identity();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn order(&self) -> u64 {
        let mut k = 1;
        let mut x = self.clone();
        while !x.is_identity() {
            x = x.mul(self);
            k += 1;
        }
        k
    }

    pub fn is_identity(&self) -> bool {
        self.rep == self.field.identity().rep
    }
}

impl PartialEq for GaloisElement {
    fn eq(&self, other: &Self) -> bool {
        self.rep == other.rep && self.field == other.field
    }
}

impl Eq for GaloisElement {}

impl Hash for GaloisElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.hash(state);
        self.rep.hash(state);
    }
}

impl fmt::Debug for GaloisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]_{}", self.rep, self.field.conductor())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction() {
        assert_eq!(AbelianField::new(3, &[]).unwrap().degree(), 2);
        let r5 = AbelianField::new(5, &[-1]).unwrap();
        assert_eq!(r5.degree(), 2);
        assert!(!r5.is_imaginary());
        assert_eq!(AbelianField::new(15, &[]).unwrap().degree(), 8);
        assert!(matches!(
            AbelianField::new(6, &[]),
            Err(Error::ConductorTwoModFour(6))
        ));
        assert!(matches!(
            AbelianField::new(9, &[4]),
            Err(Error::InexactConductor {
                given: 9,
                actual: 3
            })
        ));
        assert!(AbelianField::new(15, &[3]).is_err());
        assert!(AbelianField::cyclotomic(12).is_imaginary());
        assert!(AbelianField::rationals().is_rationals());
    }

    #[test]
    fn artin_and_restriction() {
        let f15 = AbelianField::cyclotomic(15);
        let k3 = AbelianField::cyclotomic(3);
        let k5 = AbelianField::cyclotomic(5);
        let g7 = f15.artin(7).unwrap();
        assert!(f15.restrict(&k3, &g7).unwrap().is_identity());
        let g2 = f15.artin(2).unwrap();
        assert_eq!(f15.restrict(&k5, &g2).unwrap(), k5.artin(2).unwrap());
        assert_eq!(k5.artin(2).unwrap().order(), 4);
        let f9 = AbelianField::cyclotomic(9);
        assert_eq!(
            f9.restrict(&k3, &f9.conjugation()).unwrap(),
            k3.conjugation()
        );
        assert!(f15.artin(5).is_err());
        assert!(k3.restrict(&f15, &k3.identity()).is_err());
    }

    #[test]
    fn subfield_lattice() {
        // Q(zeta_15): (Z/15)^x = C2 x C4 has 8 subgroups
        let subs = AbelianField::cyclotomic(15).subfields();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().any(|k| k.is_rationals()));
        assert!(subs.contains(&AbelianField::cyclotomic(5)));
        assert!(subs.contains(&AbelianField::new(5, &[-1]).unwrap()));
        let q7 = AbelianField::cyclotomic(7).subfields();
        assert_eq!(q7.len(), 4);
    }

    #[test]
    fn decomposition_fields() {
        let f21 = AbelianField::cyclotomic(21);
        // 7 = 1 mod 3 splits in Q(zeta_3)
        assert_eq!(f21.decomposition_field(7), AbelianField::cyclotomic(3));
        // 5 is inert in Q(zeta_3), 3 generates mod 5
        let f15 = AbelianField::cyclotomic(15);
        assert!(f15.decomposition_field(5).is_rationals());
        assert!(f15.decomposition_field(3).is_rationals());
    }
}
