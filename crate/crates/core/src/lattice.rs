//! Elementary divisors of integer matrices over Z/l^P.

use crate::arith::{checked_prime_power, inv_mod, mul_mod, val_u64};
use crate::error::{Error, Result};

/// Outcome of a normal-form computation over Z/l^P.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalNormalForm {
    /// l-valuations of the elementary divisors found, each below the precision.
    pub valuations: Vec<u32>,
    /// Number of columns.
    pub columns: usize,
    pub precision: u32,
}

impl LocalNormalForm {
    /// Whether the row span has full rank with every divisor certified nonzero.
    pub fn full_rank(&self) -> bool {
        self.valuations.len() == self.columns
    }

    /// l-valuation of the index of the row lattice in Z_l^columns, when certified.
    pub fn index_valuation(&self) -> Option<u64> {
        if self.full_rank() {
            Some(self.valuations.iter().map(|&v| v as u64).sum())
        } else {
            None
        }
    }
}

/// Row-reduce with minimal-valuation pivots; entries are residues mod l^P.
pub fn local_normal_form(rows: &[Vec<u64>], ell: u64, precision: u32) -> Result<LocalNormalForm> {
    let modulus = checked_prime_power(ell, precision).ok_or(Error::ModulusTooLarge {
        ell,
        prec: precision,
    })?;
    let columns = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != columns) {
        return Err(Error::Invalid("ragged matrix".into()));
    }
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x % modulus).collect())
        .collect();
    let mut row_done = vec![false; a.len()];
    let mut col_done = vec![false; columns];
    let mut valuations = Vec::new();
    loop {
        // minimal valuation over the live submatrix
        let mut best: Option<(u32, usize, usize)> = None;
        for (r, row) in a.iter().enumerate() {
            if row_done[r] {
                continue;
            }
            for (c, &x) in row.iter().enumerate() {
                if col_done[c] || x == 0 {
                    continue;
                }
                let v = val_u64(x, ell);
                if best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, r, c));
                    if v == 0 {
                        break;
                    }
                }
            }
            if matches!(best, Some((0, _, _))) {
                break;
            }
        }
        let Some((v, pr, pc)) = best else { break };
        valuations.push(v);
        row_done[pr] = true;
        col_done[pc] = true;
        let scale = checked_prime_power(ell, v).unwrap();
        let unit_inv = inv_mod((a[pr][pc] / scale) % modulus, modulus).unwrap();
        let pivot_row = a[pr].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if row_done[r] || row[pc] == 0 {
                continue;
            }
            // row -= (x / l^v) * u^{-1} * pivot_row
            let factor = mul_mod(row[pc] / scale, unit_inv, modulus);
            for (x, &p) in row.iter_mut().zip(&pivot_row) {
                let t = mul_mod(factor, p, modulus);
                *x = (*x + modulus - t) % modulus;
            }
        }
    }
    Ok(LocalNormalForm {
        valuations,
        columns,
        precision,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_and_dependent() {
        let nf = local_normal_form(&[vec![3, 0], vec![0, 9]], 3, 5).unwrap();
        assert_eq!(nf.index_valuation(), Some(3));
        let nf = local_normal_form(&[vec![1, 2], vec![2, 4]], 3, 5).unwrap();
        assert!(!nf.full_rank());
        // [[2,1],[1,2]] has determinant 3
        let nf = local_normal_form(&[vec![2, 1], vec![1, 2]], 3, 4).unwrap();
        assert_eq!(nf.index_valuation(), Some(1));
        assert!(local_normal_form(&[], 3, 2).unwrap().full_rank());
    }
}
