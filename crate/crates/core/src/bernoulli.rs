//! Generalized Bernoulli numbers B_{1,chi}, character values of Stickelberger
//! elements, Kummer congruences, relative class numbers of Q(zeta_p), and the
//! eigenspace valuations of twisted Stickelberger elements.
//!
//! Conventions: B_1 = -1/2, and B_{1,chi} = (1/f) sum_{a=1}^{f} chi(a) a for
//! chi primitive of conductor f. The prime above l in Q(zeta_{l-1}) is fixed
//! by zeta_{l-1} -> Teichmüller lift of the primitive root generating
//! (Z/lZ)^x in the character group of Q(zeta_l).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Mutex, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{
    factor, is_prime, rat, rat_int, teichmuller, CyclotomicNumber, PadicNumber, Rational,
};
use crate::error::{Error, Result};
use crate::field::{AbelianField, DirichletCharacter, RationalElement};
use crate::stickelberger::{check_twist, stickelberger, twisted_stickelberger};

/// B_{1,chi} of the primitive character attached to chi.
pub fn gen_bernoulli_b1(chi: &DirichletCharacter) -> Result<CyclotomicNumber> {
    if chi.is_trivial() {
        return Err(Error::TrivialCharacter);
    }
    let f = chi.conductor();
    let e = chi.order();
    let mut sums = vec![Rational::zero(); e as usize];
    for a in 1..=f {
        if let Some(k) = chi.primitive_value_exponent(a as i64, f) {
            sums[k as usize] += rat_int(a as i64);
        }
    }
    Ok(CyclotomicNumber::from_exponent_sums(e, sums).scale(&rat(1, f as i64)))
}

/// sum_g coeff(g) chi(g).
pub fn char_eval(x: &RationalElement, chi: &DirichletCharacter) -> Result<CyclotomicNumber> {
    x.evaluate(chi)
}

/// Primes dividing the field conductor but not the conductor of chi.
pub fn euler_primes(chi: &DirichletCharacter) -> Vec<u64> {
    let fc = chi.conductor();
    factor(chi.field().conductor())
        .into_iter()
        .map(|(p, _)| p)
        .filter(|p| !fc.is_multiple_of(*p))
        .collect()
}

/// B_{1,chi} times prod (1 - chi(p)) over `euler_primes(chi)`; this is
/// (1/f) sum_{(a,f)=1} a chi(a) with f the field conductor.
pub fn imprimitive_b1(chi: &DirichletCharacter) -> Result<CyclotomicNumber> {
    let mut value = gen_bernoulli_b1(chi)?;
    let fc = chi.conductor();
    let e = chi.order();
    for p in euler_primes(chi) {
        let k = chi
            .primitive_value_exponent(p as i64, fc)
            .expect("p is prime to the conductor");
        let factor = CyclotomicNumber::one(e).sub(&CyclotomicNumber::zeta_power(e, k as i64));
        value = value.mul(&factor);
    }
    Ok(value)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterRow {
    /// Exponents of chi on the fixed generators of (Z/fZ)^x.
    pub chi: Vec<u64>,
    pub order: u64,
    pub conductor: u64,
    pub odd: bool,
    pub euler_primes: Vec<u64>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalIdentityReport {
    pub f: u64,
    pub generators: Vec<u64>,
    /// The global sign s with chi(sigma_F) = s * B_{1, conj chi} (Euler factors included).
    pub sign: i32,
    pub rows: Vec<CharacterRow>,
    pub holds: bool,
}

/// chi(sigma_F) against B_{1, conj chi} at every character of F, with one
/// sign fixed for the whole field.
pub fn stick_eval_identity_check(field: &AbelianField) -> Result<EvalIdentityReport> {
    let sigma = stickelberger(field)?;
    let chars = field.characters();
    let mut values = Vec::with_capacity(chars.len());
    for chi in &chars {
        let lhs = char_eval(&sigma, chi)?;
        let rhs = if chi.is_trivial() {
            None
        } else {
            Some(imprimitive_b1(&chi.conj())?)
        };
        values.push((lhs, rhs));
    }
    let matches = |s: i32| -> Vec<bool> {
        values
            .iter()
            .map(|(lhs, rhs)| match rhs {
                None => lhs.is_zero(),
                Some(r) => {
                    let r = if s > 0 { r.clone() } else { r.neg() };
                    lhs.sub(&r).is_zero()
                }
            })
            .collect()
    };
    let plus = matches(1);
    let minus = matches(-1);
    let count = |v: &[bool]| v.iter().filter(|&&b| b).count();
    let (sign, ok) = if count(&plus) >= count(&minus) {
        (1, plus)
    } else {
        (-1, minus)
    };
    let rows: Vec<CharacterRow> = chars
        .iter()
        .zip(&ok)
        .map(|(chi, &holds)| CharacterRow {
            chi: chi.exponents().to_vec(),
            order: chi.order(),
            conductor: chi.conductor(),
            odd: chi.is_odd(),
            euler_primes: euler_primes(chi),
            holds,
        })
        .collect();
    let holds = rows.iter().all(|r| r.holds);
    Ok(EvalIdentityReport {
        f: field.conductor(),
        generators: field.character_group().generators().to_vec(),
        sign,
        rows,
        holds,
    })
}

/// Bernoulli numbers B_0..B_k, memoized in memory and optionally on disk.
///
/// Reads take a shared lock; extension and file writes are serialized.
pub struct BernoulliCache {
    values: RwLock<Vec<Rational>>,
    path: Option<PathBuf>,
    write: Mutex<()>,
}

#[derive(Serialize, Deserialize)]
struct CacheFile(BTreeMap<u64, [String; 2]>);

impl BernoulliCache {
    pub fn in_memory() -> Self {
        BernoulliCache {
            values: RwLock::new(vec![Rational::one()]),
            path: None,
            write: Mutex::new(()),
        }
    }

    /// Backed by a JSON file {"k": [num, den], ...}; a missing file is an empty cache.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let cache = BernoulliCache {
            values: RwLock::new(vec![Rational::one()]),
            path: Some(path.clone()),
            write: Mutex::new(()),
        };
        if let Ok(text) = fs::read_to_string(&path) {
            let file: CacheFile =
                serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            let mut loaded = Vec::new();
            for (k, [n, d]) in file.0 {
                if k as usize != loaded.len() {
                    break;
                }
                let n: BigInt = n.parse().map_err(|_| Error::Parse(n.clone()))?;
                let d: BigInt = d.parse().map_err(|_| Error::Parse(d.clone()))?;
                if d.is_zero() {
                    return Err(Error::Parse("zero denominator".into()));
                }
                loaded.push(Rational::new(n, d));
            }
            if !loaded.is_empty() {
                *cache.values.write().unwrap() = loaded;
            }
        }
        Ok(cache)
    }

    pub fn get(&self, k: u64) -> Rational {
        {
            let v = self.values.read().unwrap();
            if (k as usize) < v.len() {
                return v[k as usize].clone();
            }
        }
        let _guard = self.write.lock().unwrap();
        let mut v = self.values.write().unwrap();
        extend_bernoulli(&mut v, k as usize);
        v[k as usize].clone()
    }

    pub fn len(&self) -> usize {
        self.values.read().unwrap().len()
    }

    /// Adopt the other cache's values if it knows more of them.
    pub fn merge_from(&self, other: &BernoulliCache) {
        let theirs = other.values.read().unwrap().clone();
        let _guard = self.write.lock().unwrap();
        let mut mine = self.values.write().unwrap();
        if theirs.len() > mine.len() {
            *mine = theirs;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Write the known values to the backing file, if any.
    pub fn save(&self) -> Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        let _guard = self.write.lock().unwrap();
        let v = self.values.read().unwrap();
        let map = CacheFile(
            v.iter()
                .enumerate()
                .map(|(k, b)| (k as u64, [b.numer().to_string(), b.denom().to_string()]))
                .collect(),
        );
        let text = serde_json::to_string(&map).map_err(|e| Error::Parse(e.to_string()))?;
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(|e| Error::Invalid(e.to_string()))?;
        }
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, text).map_err(|e| Error::Invalid(e.to_string()))?;
        fs::rename(&tmp, path).map_err(|e| Error::Invalid(e.to_string()))
    }
}

// sum_{j=0}^{m} C(m+1, j) B_j = 0
fn extend_bernoulli(v: &mut Vec<Rational>, k: usize) {
    while v.len() <= k {
        let m = v.len();
        let mut binom = BigInt::one();
        let mut acc = Rational::zero();
        for (j, b) in v.iter().enumerate() {
            acc += b * Rational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        v.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
    }
}

/// The process-wide cache behind `ordinary_bernoulli`.
pub fn global_cache() -> &'static BernoulliCache {
    static CACHE: OnceLock<BernoulliCache> = OnceLock::new();
    CACHE.get_or_init(BernoulliCache::in_memory)
}

/// B_k, with B_1 = -1/2.
pub fn ordinary_bernoulli(k: u64) -> Rational {
    global_cache().get(k)
}

fn check_odd_prime(ell: u64) -> Result<()> {
    if ell < 3 || !is_prime(ell) {
        return Err(Error::NotOddPrime(ell));
    }
    Ok(())
}

/// Image in Q_l of a number in Q(zeta_e), e | l - 1, at relative precision `precision`.
pub fn teichmuller_embedding(
    x: &CyclotomicNumber,
    ell: u64,
    precision: u32,
) -> Result<PadicNumber> {
    check_odd_prime(ell)?;
    let e = x.order();
    if !(ell - 1).is_multiple_of(e) {
        return Err(Error::Invalid(format!(
            "Q(zeta_{}) does not embed in Q_{}",
            e, ell
        )));
    }
    let work = precision + 2;
    let g = AbelianField::cyclotomic(ell).character_group().generators()[0];
    let w = teichmuller(&PadicNumber::from_i64(ell, g as i64, work)?, work)?;
    let zeta = w.pow(((ell - 1) / e) as i64)?;
    let mut acc = PadicNumber::exact_zero(ell);
    let mut z = PadicNumber::from_i64(ell, 1, work)?;
    for c in x.coeffs() {
        if !c.is_zero() {
            acc = acc.add(&PadicNumber::from_rational(ell, c, work)?.mul(&z));
        }
        z = z.mul(&zeta);
    }
    Ok(acc)
}

/// omega^j on Q(zeta_l), omega the Teichmüller character for the fixed embedding.
pub fn teichmuller_character(ell: u64, j: i64) -> Result<DirichletCharacter> {
    check_odd_prime(ell)?;
    let field = AbelianField::cyclotomic(ell);
    DirichletCharacter::from_exponents(&field, &[j.rem_euclid(ell as i64 - 1) as u64])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KummerReport {
    pub ell: u64,
    pub k: u64,
    /// B_{1, omega^{k-1}} mod l.
    pub character_side: u64,
    /// B_k / k mod l.
    pub bernoulli_side: u64,
    pub holds: bool,
    /// Both sides vanish mod l.
    pub irregular: bool,
}

fn residue_mod_ell(x: &PadicNumber, ell: u64) -> Result<u64> {
    if !x.is_integral() {
        return Err(Error::DenominatorNotUnit(ell));
    }
    Ok(x.to_i64_mod(1)
        .map(|r| r.rem_euclid(ell as i64) as u64)
        .unwrap_or(0))
}

/// B_{1, omega^{k-1}} = B_k / k mod l for even 2 <= k <= l - 3.
pub fn kummer_check(ell: u64, k: u64) -> Result<KummerReport> {
    check_odd_prime(ell)?;
    if k % 2 == 1 || k < 2 || k + 3 > ell {
        return Err(Error::Invalid(format!(
            "k = {} outside the even range 2..={}",
            k,
            ell.saturating_sub(3)
        )));
    }
    let chi = teichmuller_character(ell, k as i64 - 1)?;
    let b1 = gen_bernoulli_b1(&chi)?;
    let left = residue_mod_ell(&teichmuller_embedding(&b1, ell, 4)?, ell)?;
    let bk = ordinary_bernoulli(k) / rat_int(k as i64);
    let right = residue_mod_ell(&PadicNumber::from_rational(ell, &bk, 4)?, ell)?;
    Ok(KummerReport {
        ell,
        k,
        character_side: left,
        bernoulli_side: right,
        holds: left == right,
        irregular: left == 0 && right == 0,
    })
}

/// Even k in [2, l - 3] with l dividing the numerator of B_k.
pub fn irregular_indices(ell: u64) -> Result<Vec<u64>> {
    check_odd_prime(ell)?;
    let l = BigInt::from(ell);
    Ok((2..ell.saturating_sub(2))
        .step_by(2)
        .filter(|&k| (ordinary_bernoulli(k).numer() % &l).is_zero())
        .collect())
}

/// h^- of Q(zeta_p) = 2p prod_{chi odd} (-B_{1,chi} / 2).
pub fn minus_class_number(p: u64) -> Result<BigInt> {
    check_odd_prime(p)?;
    let field = AbelianField::cyclotomic(p);
    let mut prod = CyclotomicNumber::from_rational(p - 1, rat_int(2 * p as i64));
    let minus_half = rat(-1, 2);
    for chi in field.characters().iter().filter(|c| c.is_odd()) {
        prod = prod.mul(&gen_bernoulli_b1(chi)?.scale(&minus_half));
    }
    let value = prod
        .as_rational()
        .ok_or_else(|| Error::Invalid("relative class number is not rational".into()))?;
    if !value.denom().is_one() || value <= Rational::zero() {
        return Err(Error::Invalid(format!(
            "relative class number {} is not a positive integer",
            value
        )));
    }
    Ok(value.numer().clone())
}

/// One odd character omega^k of Q(zeta_l) in the eigenspace table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenRow {
    pub chi: String,
    pub k: u64,
    /// v_l of chi(sigma^c); None when zero to the working precision.
    pub valuation: Option<i64>,
    pub twist_valuation: Option<i64>,
    pub bernoulli_valuation: Option<i64>,
    /// Bernoulli part positive.
    pub irregular: bool,
    /// Even index l - k paired with this character by the Kummer congruence.
    pub paired_index: u64,
    /// valuation = twist_valuation + bernoulli_valuation.
    pub additive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyTable {
    pub ell: u64,
    pub c: i64,
    pub precision: u32,
    pub rows: Vec<EigenRow>,
    /// omega itself is left out: its twist factor and B_{1, omega^{-1}} have
    /// valuations +1 and -1.
    pub excluded: Vec<String>,
    /// Indices with positive Bernoulli valuation.
    pub flagged: Vec<u64>,
    /// Irregular indices from B_k numerators.
    pub kummer_irregular: Vec<u64>,
    /// flagged == kummer_irregular and every row is additive.
    pub consistent: bool,
}

fn val(x: &PadicNumber) -> Option<i64> {
    x.valuation().filter(|_| !x.is_zero())
}

/// Eigen-valuations of sigma^c on Q(zeta_l) at the odd characters omega^k, k != 1.
pub fn annihilation_consistency(ell: u64, c: i64, precision: u32) -> Result<ConsistencyTable> {
    check_odd_prime(ell)?;
    check_twist(ell, c)?;
    let field = AbelianField::cyclotomic(ell);
    let sigma_c = twisted_stickelberger(&field, c)?;
    let mut rows = Vec::new();
    let mut excluded = Vec::new();
    for k in (1..ell - 1).step_by(2) {
        let name = format!("omega^{}", k);
        if k == 1 {
            excluded.push(name);
            continue;
        }
        let chi = teichmuller_character(ell, k as i64)?;
        let total = teichmuller_embedding(&char_eval(&sigma_c, &chi)?, ell, precision)?;
        // chi(1 - c sigma_c^{-1}) = 1 - c conj(chi)(c)
        let e = chi.order();
        let kc = chi.value_exponent(c).expect("c is prime to l");
        let twist = CyclotomicNumber::one(e)
            .sub(&CyclotomicNumber::zeta_power(e, -(kc as i64)).scale(&rat_int(c)));
        let twist = teichmuller_embedding(&twist, ell, precision)?;
        let bern = teichmuller_embedding(&gen_bernoulli_b1(&chi.conj())?, ell, precision)?;
        let (v, vt, vb) = (val(&total), val(&twist), val(&bern));
        let additive = match (v, vt, vb) {
            (Some(a), Some(b), Some(c)) => a == b + c,
            (None, _, _) => {
                vt.is_none() || vb.is_none() || vt.unwrap() + vb.unwrap() >= precision as i64
            }
            _ => false,
        };
        rows.push(EigenRow {
            chi: name,
            k,
            valuation: v,
            twist_valuation: vt,
            bernoulli_valuation: vb,
            irregular: vb.is_none_or(|x| x > 0),
            paired_index: ell - k,
            additive,
        });
    }
    let mut flagged: Vec<u64> = rows
        .iter()
        .filter(|r| r.irregular)
        .map(|r| r.paired_index)
        .collect();
    flagged.sort_unstable();
    let kummer_irregular = irregular_indices(ell)?;
    let consistent = flagged == kummer_irregular && rows.iter().all(|r| r.additive);
    Ok(ConsistencyTable {
        ell,
        c,
        precision,
        rows,
        excluded,
        flagged,
        kummer_irregular,
        consistent,
    })
}

/// Smallest odd c > 1 generating (Z/lZ)^x; for such c the twist factor is a
/// unit at every omega^k with k != 1.
pub fn odd_primitive_root(ell: u64) -> Result<i64> {
    check_odd_prime(ell)?;
    let primes: Vec<u64> = factor(ell - 1).into_iter().map(|(q, _)| q).collect();
    (3..ell)
        .step_by(2)
        .find(|&g| {
            primes
                .iter()
                .all(|&q| crate::arith::pow_mod(g, (ell - 1) / q, ell) != 1)
        })
        .map(|g| g as i64)
        .ok_or_else(|| Error::Invalid(format!("no odd primitive root below {}", ell)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_numbers() {
        assert_eq!(ordinary_bernoulli(0), rat_int(1));
        assert_eq!(ordinary_bernoulli(1), rat(-1, 2));
        assert_eq!(ordinary_bernoulli(2), rat(1, 6));
        assert_eq!(ordinary_bernoulli(3), rat_int(0));
        assert_eq!(ordinary_bernoulli(12), rat(-691, 2730));
    }

    #[test]
    fn quadratic_b1() {
        let q3 = AbelianField::cyclotomic(3);
        let chi = &q3.characters()[1];
        assert_eq!(
            gen_bernoulli_b1(chi).unwrap().as_rational(),
            Some(rat(-1, 3))
        );
        let q4 = AbelianField::cyclotomic(4);
        assert_eq!(
            gen_bernoulli_b1(&q4.characters()[1]).unwrap().as_rational(),
            Some(rat(-1, 2))
        );
        assert!(gen_bernoulli_b1(&q3.characters()[0]).is_err());
        let q13 = AbelianField::cyclotomic(13);
        for chi in q13.characters().iter().skip(1) {
            assert_eq!(gen_bernoulli_b1(chi).unwrap().is_zero(), !chi.is_odd());
        }
    }

    #[test]
    fn identity_small() {
        for f in [3u64, 4, 5, 15, 20] {
            let r = stick_eval_identity_check(&AbelianField::cyclotomic(f)).unwrap();
            assert!(r.holds, "f={} {:?}", f, r);
            assert_eq!(r.sign, 1);
        }
    }

    #[test]
    fn class_numbers() {
        for p in [3u64, 5, 7, 11, 13, 17, 19] {
            assert_eq!(minus_class_number(p).unwrap(), BigInt::from(1));
        }
        assert_eq!(minus_class_number(23).unwrap(), BigInt::from(3));
    }

    #[test]
    fn kummer() {
        assert!(kummer_check(5, 2).unwrap().holds);
        assert!(kummer_check(7, 4).unwrap().holds);
        let r = kummer_check(37, 32).unwrap();
        assert!(r.holds && r.irregular);
        assert!(kummer_check(7, 3).is_err());
        assert_eq!(irregular_indices(37).unwrap(), vec![32]);
    }

    #[test]
    fn consistency() {
        let t = annihilation_consistency(5, 3, 10).unwrap();
        assert!(t.consistent && t.flagged.is_empty());
        let t = annihilation_consistency(3, 5, 10).unwrap();
        assert!(t.rows.is_empty() && t.excluded.len() == 1);
        let t = annihilation_consistency(37, odd_primitive_root(37).unwrap(), 10).unwrap();
        assert!(t.consistent, "{:?}", t);
        assert_eq!(t.flagged, vec![32]);
        assert!(t
            .rows
            .iter()
            .filter(|r| r.valuation.is_none_or(|v| v > 0))
            .all(|r| r.k == 5));
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("stickel-bern-{}", std::process::id()));
        let path = dir.join("b.json");
        let cache = BernoulliCache::open(&path).unwrap();
        assert_eq!(cache.get(20), ordinary_bernoulli(20));
        cache.save().unwrap();
        let again = BernoulliCache::open(&path).unwrap();
        assert_eq!(again.len(), 21);
        assert_eq!(again.get(12), rat(-691, 2730));
        let _ = fs::remove_dir_all(dir);
    }
}
