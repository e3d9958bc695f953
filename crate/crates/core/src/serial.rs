//! JSON forms of the library's values.
//!
//! Integers are JSON numbers when they fit in an i64 and decimal strings
//! otherwise; readers accept either. Every `to_json` output is read back by
//! the matching `from_json` to an equal value.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::arith::{AdicRing, CyclotomicNumber, PadicNumber, Rational};
use crate::error::{Error, Result};
use crate::field::{AbelianField, AdicElement, DirichletCharacter, RationalElement};
use crate::logval::{DegreeTerm, DegreeZeroReport, Place};
use crate::tower::{IndexReport, IwasawaElement, TowerContext};

pub trait Json: Sized {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;

    fn to_json_string(&self) -> String {
        self.to_json().to_string()
    }

    fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&v)
    }
}

fn bad(what: &str) -> Error {
    Error::Parse(what.to_string())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| bad(&format!("missing \"{}\"", key)))
}

pub fn int_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(x) => json!(x),
        None => json!(n.to_string()),
    }
}

pub fn int_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| bad("integer expected")),
        Value::String(s) => s.parse().map_err(|_| bad("integer string expected")),
        _ => Err(bad("integer expected")),
    }
}

fn u64_of(v: &Value) -> Result<u64> {
    int_from_json(v)?
        .to_u64()
        .ok_or_else(|| bad("non-negative integer expected"))
}

fn i64_of(v: &Value) -> Result<i64> {
    int_from_json(v)?
        .to_i64()
        .ok_or_else(|| bad("64-bit integer expected"))
}

fn u32_of(v: &Value) -> Result<u32> {
    u64_of(v)?
        .try_into()
        .map_err(|_| bad("32-bit integer expected"))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| bad(&format!("{} must be an array", what)))
}

fn rational_parts(num: &Value, den: &Value) -> Result<Rational> {
    let d = int_from_json(den)?;
    if d.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(int_from_json(num)?, d))
}

impl Json for Rational {
    /// [num, den]
    fn to_json(&self) -> Value {
        json!([int_to_json(self.numer()), int_to_json(self.denom())])
    }

    fn from_json(v: &Value) -> Result<Self> {
        match array(v, "rational")?.as_slice() {
            [n, d] => rational_parts(n, d),
            _ => Err(bad("rational must be [num, den]")),
        }
    }
}

impl Json for CyclotomicNumber {
    fn to_json(&self) -> Value {
        json!({
            "order": self.order(),
            "coeffs": self.coeffs().iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        })
    }

    fn from_json(v: &Value) -> Result<Self> {
        let order = u64_of(field(v, "order")?)?;
        if order == 0 {
            return Err(bad("order must be positive"));
        }
        let coeffs = array(field(v, "coeffs")?, "coeffs")?
            .iter()
            .map(Rational::from_json)
            .collect::<Result<Vec<_>>>()?;
        Ok(CyclotomicNumber::from_polynomial(order, coeffs))
    }
}

impl Json for PadicNumber {
    fn to_json(&self) -> Value {
        match self.valuation() {
            Some(v) => json!({
                "prime": self.prime(),
                "valuation": v,
                "unit": int_to_json(&self.unit()),
                "precision": self.precision(),
            }),
            None => json!({
                "prime": self.prime(),
                "valuation": Value::Null,
                "absolute": self.absolute_precision(),
            }),
        }
    }

    fn from_json(v: &Value) -> Result<Self> {
        let prime = u64_of(field(v, "prime")?)?;
        match field(v, "valuation")? {
            Value::Null => {
                // validates the prime
                PadicNumber::from_i64(prime, 1, 1)?;
                match v.get("absolute") {
                    None | Some(Value::Null) => Ok(PadicNumber::exact_zero(prime)),
                    Some(a) => Ok(PadicNumber::zero_mod(prime, i64_of(a)?)),
                }
            }
            val => PadicNumber::from_unit(
                prime,
                i64_of(val)?,
                &int_from_json(field(v, "unit")?)?,
                u32_of(field(v, "precision")?)?,
            ),
        }
    }
}

impl Json for AbelianField {
    /// {"f": int, "H": [int]} with H the kernel generators.
    fn to_json(&self) -> Value {
        json!({ "f": self.conductor(), "H": self.kernel_generators() })
    }

    fn from_json(v: &Value) -> Result<Self> {
        let f = u64_of(field(v, "f")?)?;
        let h = array(field(v, "H")?, "H")?
            .iter()
            .map(i64_of)
            .collect::<Result<Vec<_>>>()?;
        AbelianField::new(f, &h)
    }
}

impl Json for DirichletCharacter {
    /// Values chi(g_i) = zeta_e^{k_i} on the listed generators of (Z/fZ)^x.
    fn to_json(&self) -> Value {
        let e = self.order();
        json!({
            "field": self.field().to_json(),
            "generators": self.field().character_group().generators(),
            "order": e,
            "values": self.generator_values(),
        })
    }

    fn from_json(v: &Value) -> Result<Self> {
        let f = AbelianField::from_json(field(v, "field")?)?;
        let gens = array(field(v, "generators")?, "generators")?
            .iter()
            .map(u64_of)
            .collect::<Result<Vec<_>>>()?;
        if gens != f.character_group().generators() {
            return Err(bad("generator set differs from the canonical one"));
        }
        let e = u64_of(field(v, "order")?)?;
        let values = array(field(v, "values")?, "values")?
            .iter()
            .map(|x| Ok((u64_of(x)?, e)))
            .collect::<Result<Vec<_>>>()?;
        let chi = DirichletCharacter::from_values(&f, &values)?;
        if chi.order() != e {
            return Err(bad("order does not match the values"));
        }
        Ok(chi)
    }
}

impl Json for RationalElement {
    /// {"f", "H", "coeffs": [[rep, num, den], ...]}
    fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self
            .terms()
            .map(|(r, c)| json!([r, int_to_json(c.numer()), int_to_json(c.denom())]))
            .collect();
        json!({ "f": self.field().conductor(), "H": self.field().kernel_generators(), "coeffs": coeffs })
    }

    fn from_json(v: &Value) -> Result<Self> {
        let f = AbelianField::from_json(v)?;
        let mut out = RationalElement::rational_zero(&f);
        for t in array(field(v, "coeffs")?, "coeffs")? {
            match array(t, "term")?.as_slice() {
                [r, n, d] => {
                    let r = u64_of(r)?;
                    if r >= f.conductor().max(1) || f.canonical(r) != r {
                        return Err(bad("non-canonical representative"));
                    }
                    out.add_term(r, rational_parts(n, d)?);
                }
                _ => return Err(bad("term must be [rep, num, den]")),
            }
        }
        Ok(out)
    }
}

impl Json for AdicElement {
    /// {"f", "H", "ell", "M", "coeffs": [[rep, residue, 1], ...]}
    fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self
            .terms()
            .map(|(r, c)| json!([r, c.value(), 1]))
            .collect();
        json!({
            "f": self.field().conductor(),
            "H": self.field().kernel_generators(),
            "ell": self.ring().prime,
            "M": self.ring().precision,
            "coeffs": coeffs,
        })
    }

    fn from_json(v: &Value) -> Result<Self> {
        let f = AbelianField::from_json(v)?;
        let ring = AdicRing::new(u64_of(field(v, "ell")?)?, u32_of(field(v, "M")?)?)?;
        let mut out = AdicElement::adic_zero(&f, &ring);
        for t in array(field(v, "coeffs")?, "coeffs")? {
            match array(t, "term")?.as_slice() {
                [r, n, d] => {
                    let r = u64_of(r)?;
                    if r >= f.conductor().max(1) || f.canonical(r) != r {
                        return Err(bad("non-canonical representative"));
                    }
                    out.add_term(r, ring.from_rational(&rational_parts(n, d)?)?);
                }
                _ => return Err(bad("term must be [rep, num, den]")),
            }
        }
        Ok(out)
    }
}

impl Json for IwasawaElement {
    /// {"ell", "M", "N", "base", "delta", "precision", "exact", "coeffs": [adic element per power of T]}
    fn to_json(&self) -> Value {
        let ctx = self.context();
        let coeffs: Vec<Value> = (0..ctx.truncation())
            .map(|k| self.coefficient(k).to_json())
            .collect();
        json!({
            "ell": ctx.ell(),
            "M": ctx.precision(),
            "N": ctx.truncation(),
            "base": ctx.base().to_json(),
            "delta": ctx.delta_field().to_json(),
            "precision": self.precision(),
            "exact": self.is_exact(),
            "coeffs": coeffs,
        })
    }

    fn from_json(v: &Value) -> Result<Self> {
        let base = AbelianField::from_json(field(v, "base")?)?;
        let n = u64_of(field(v, "N")?)? as usize;
        let ctx = TowerContext::new(u64_of(field(v, "ell")?)?, &base, u32_of(field(v, "M")?)?, n)?;
        if AbelianField::from_json(field(v, "delta")?)? != *ctx.delta_field() {
            return Err(bad("delta field does not match the base field"));
        }
        let exact = field(v, "exact")?
            .as_bool()
            .ok_or_else(|| bad("exact must be a boolean"))?;
        let precision = u32_of(field(v, "precision")?)?;
        let rows = array(field(v, "coeffs")?, "coeffs")?;
        if rows.len() > n {
            return Err(bad("too many coefficients"));
        }
        let delta = ctx.delta_field();
        let mut raw = Vec::with_capacity(rows.len());
        for row in rows {
            let x = AdicElement::from_json(row)?;
            if x.field() != delta {
                return Err(bad("coefficient over the wrong field"));
            }
            let mut line = vec![0u64; delta.degree()];
            for (r, c) in x.terms() {
                line[delta.index_of(r)] = c.value();
            }
            raw.push(line);
        }
        IwasawaElement::from_raw(&ctx, raw, precision, exact)
    }
}

impl Json for IndexReport {
    fn to_json(&self) -> Value {
        json!({ "valuation": self.valuation, "certified": self.certified, "precision": self.precision })
    }

    fn from_json(v: &Value) -> Result<Self> {
        let valuation = match field(v, "valuation")? {
            Value::Null => None,
            x => Some(u64_of(x)?),
        };
        Ok(IndexReport {
            valuation,
            certified: field(v, "certified")?
                .as_bool()
                .ok_or_else(|| bad("certified must be a boolean"))?,
            precision: v.get("precision").map(u32_of).transpose()?.unwrap_or(0),
        })
    }
}

fn place_to_json(p: Place) -> Value {
    match p {
        Place::Prime(p) => json!(p),
        Place::Ell => json!("l"),
    }
}

fn place_from_json(v: &Value) -> Result<Place> {
    match v {
        Value::String(s) if s == "l" => Ok(Place::Ell),
        x => Ok(Place::Prime(u64_of(x)?)),
    }
}

impl Json for DegreeZeroReport {
    /// {"x": [num, den], "ell", "terms": [{"place", "nu", "deg"}], "sum", "sum_valuation_ge", "holds"}
    fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|t| json!({ "place": place_to_json(t.place), "nu": t.nu.to_json(), "deg": t.deg.to_json() }))
            .collect();
        let mut m = Map::new();
        m.insert("x".into(), self.x.to_json());
        m.insert("ell".into(), json!(self.ell));
        m.insert("terms".into(), Value::Array(terms));
        m.insert("sum".into(), self.sum.to_json());
        m.insert("sum_valuation_ge".into(), json!(self.sum_valuation_ge));
        m.insert("holds".into(), json!(self.holds));
        Value::Object(m)
    }

    fn from_json(v: &Value) -> Result<Self> {
        let terms = array(field(v, "terms")?, "terms")?
            .iter()
            .map(|t| {
                Ok(DegreeTerm {
                    place: place_from_json(field(t, "place")?)?,
                    nu: PadicNumber::from_json(field(t, "nu")?)?,
                    deg: PadicNumber::from_json(field(t, "deg")?)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DegreeZeroReport {
            x: Rational::from_json(field(v, "x")?)?,
            ell: u64_of(field(v, "ell")?)?,
            terms,
            sum: PadicNumber::from_json(field(v, "sum")?)?,
            sum_valuation_ge: u32_of(field(v, "sum_valuation_ge")?)?,
            holds: field(v, "holds")?
                .as_bool()
                .ok_or_else(|| bad("holds must be a boolean"))?,
        })
    }
}

/// Round-trip through text for serde-derived report types.
pub fn serde_round_trip<T>(x: &T) -> Result<T>
where
    T: serde::Serialize + serde::de::DeserializeOwned,
{
    let s = serde_json::to_string(x).map_err(|e| Error::Parse(e.to_string()))?;
    serde_json::from_str(&s).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};
    use crate::stickelberger::twisted_stickelberger;
    use crate::tower::coherent_stickelberger;

    fn round<T: Json + PartialEq + std::fmt::Debug>(x: &T) {
        let back = T::from_json_str(&x.to_json_string()).unwrap();
        assert_eq!(&back, x);
    }

    #[test]
    fn values_round_trip() {
        round(&rat(-691, 2730));
        round(&Rational::new(BigInt::from(10).pow(30), BigInt::from(7)));
        round(&CyclotomicNumber::from_polynomial(
            5,
            vec![rat_int(1), rat(2, 3)],
        ));
        round(&PadicNumber::from_rational(5, &rat(3, 25), 6).unwrap());
        round(&PadicNumber::exact_zero(3));
        round(&PadicNumber::zero_mod(3, 4));
        let f = AbelianField::new(15, &[4]).unwrap();
        round(&f);
        for chi in f.characters() {
            round(&chi);
        }
        let s = twisted_stickelberger(&AbelianField::cyclotomic(21), 5).unwrap();
        round(&s);
        round(&s.to_adic(&AdicRing::new(7, 5).unwrap()).unwrap());
        assert!(AbelianField::from_json_str(r#"{"f": 6, "H": []}"#).is_err());
    }

    #[test]
    fn tower_round_trip() {
        let ctx = TowerContext::new(3, &AbelianField::cyclotomic(3), 8, 5).unwrap();
        let x = coherent_stickelberger(&ctx, 5, 2).unwrap();
        round(&x);
        round(&x.mirror());
        round(&IndexReport {
            valuation: Some(3),
            certified: true,
            precision: 8,
        });
        round(&IndexReport {
            valuation: None,
            certified: false,
            precision: 0,
        });
    }
}
