use super::{AbelianField, AdicElement, DirichletCharacter};
use crate::arith::unramified::{multiplicative_order, power_table, UnramifiedRing};
use crate::arith::AdicRing;
use crate::error::{Error, Result};

fn check_semisimple(field: &AbelianField, ell: u64) -> Result<()> {
    let order = field.degree() as u64;
    if order.is_multiple_of(ell) {
        return Err(Error::NotSemisimple { ell, order });
    }
    Ok(())
}

/// Orbits of the characters of F under chi -> chi^l; these index the
/// irreducible l-adic characters.
pub fn character_classes(field: &AbelianField, ell: u64) -> Result<Vec<Vec<DirichletCharacter>>> {
    check_semisimple(field, ell)?;
    let mut remaining = field.characters();
    let mut classes = Vec::new();
    while !remaining.is_empty() {
        let chi = remaining.remove(0);
        let mut orbit = vec![chi.clone()];
        let mut next = chi.pow(ell as i64);
        while next != chi {
            orbit.push(next.clone());
            next = next.pow(ell as i64);
        }
        remaining.retain(|c| !orbit.contains(c));
        classes.push(orbit);
    }
    Ok(classes)
}

/// The idempotent of the l-adic class of chi:
/// (1/|G|) sum_g Tr(chi(g)) g^{-1}, the trace taken over the Frobenius orbit.
pub fn class_idempotent(chi: &DirichletCharacter, ring: &AdicRing) -> Result<AdicElement> {
    let field = chi.field();
    let ell = ring.prime;
    check_semisimple(field, ell)?;
    let e = chi.order();
    let r = multiplicative_order(ell % e, e) as usize;
    let w = UnramifiedRing::new(ell, ring.precision, r.max(1))?;
    let zeta = w.root_of_unity(e)?;
    let powers = power_table(&w, &zeta, e);
    // traces of zeta^k for every k
    let traces: Vec<u64> = (0..e)
        .map(|k| {
            let mut t = w.constant(0);
            let mut j = k;
            for _ in 0..r {
                t = w.add(&t, &powers[j as usize]);
                j = crate::arith::mul_mod(j, ell, e);
            }
            w.as_constant(&t).expect("trace lies in Z/l^k")
        })
        .collect();
    let inv_order = ring
        .from_u64(field.degree() as u64)
        .inv()
        .ok_or(Error::NotSemisimple {
            ell,
            order: field.degree() as u64,
        })?;
    let mut out = AdicElement::adic_zero(field, ring);
    for g in field.elements() {
        let k = chi.value_exponent(g.rep() as i64).unwrap();
        let c = ring.from_u64(traces[k as usize]).mul(&inv_order);
        out.add_term(g.inverse().rep(), c);
    }
    Ok(out)
}

fn half_conj(field: &AbelianField, ring: &AdicRing, sign: i64) -> AdicElement {
    let half = ring.from_i64(2).inv().unwrap();
    let mut out = AdicElement::adic_zero(field, ring);
    out.add_term(field.identity().rep(), half);
    out.add_term(field.conjugation().rep(), half.mul(&ring.from_i64(sign)));
    out
}

/// e_+ = (1 + conj)/2.
pub fn plus_idempotent(field: &AbelianField, ring: &AdicRing) -> AdicElement {
    half_conj(field, ring, 1)
}

/// e_- = (1 - conj)/2; zero for real fields.
pub fn minus_idempotent(field: &AbelianField, ring: &AdicRing) -> AdicElement {
    half_conj(field, ring, -1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn idempotents_resolve_identity() {
        for (f, ell) in [(5u64, 3u64), (7, 5), (11, 3), (15, 7), (13, 5)] {
            let field = AbelianField::cyclotomic(f);
            let ring = AdicRing::new(ell, 6).unwrap();
            let classes = character_classes(&field, ell).unwrap();
            let idems: Vec<AdicElement> = classes
                .iter()
                .map(|c| class_idempotent(&c[0], &ring).unwrap())
                .collect();
            let mut total = AdicElement::adic_zero(&field, &ring);
            for (i, a) in idems.iter().enumerate() {
                assert_eq!(a.mul(a).unwrap(), *a);
                for b in &idems[i + 1..] {
                    assert!(a.mul(b).unwrap().is_zero());
                }
                total = total.add(a).unwrap();
            }
            assert_eq!(total, AdicElement::one(&field, &ring));
        }
    }

    #[test]
    fn quadratic_case() {
        let field = AbelianField::cyclotomic(3);
        let ring = AdicRing::new(3, 4).unwrap();
        let f7 = AbelianField::cyclotomic(7);
        assert!(class_idempotent(&f7.characters()[1], &ring).is_err());
        let ring = AdicRing::new(5, 4).unwrap();
        let odd = class_idempotent(&field.characters()[1], &ring).unwrap();
        assert_eq!(odd, minus_idempotent(&field, &ring));
        let triv = class_idempotent(&field.characters()[0], &ring).unwrap();
        assert_eq!(triv, plus_idempotent(&field, &ring));
    }
}
