//! Plain Gaussian elimination over `Z/pZ`.

use super::field::{Field, PrimeField};

/// Forward elimination to row echelon form. Returns the pivot columns; `rows` is left
/// in echelon form (pivot rows first, pivots normalized to 1).
pub(crate) fn echelon(field: &PrimeField, rows: &mut [Vec<u64>], cols: usize) -> Vec<usize> {
    let p = field.modulus();
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let Some(found) = (r..nrows).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(found, r);
        let (top, rest) = rows.split_at_mut(r + 1);
        let pivot_row = &mut top[r];
        let inv = field.inv(&pivot_row[c]);
        for v in pivot_row[c..].iter_mut() {
            *v = field.mul(v, &inv);
        }
        let pivot_row = &*pivot_row;
        for row in rest.iter_mut() {
            let factor = row[c];
            if factor == 0 {
                continue;
            }
            let neg = p - factor;
            for (v, &pv) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *v = field.mul_add(*v, neg, pv);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub(crate) fn determinant(field: &PrimeField, mut rows: Vec<Vec<u64>>) -> u64 {
    let n = rows.len();
    // Track the product of pivots before normalization, and the swap parity.
    let p = field.modulus();
    let mut det = 1u64;
    for c in 0..n {
        let Some(found) = (c..n).find(|&i| rows[i][c] != 0) else {
            return 0;
        };
        if found != c {
            rows.swap(found, c);
            det = field.neg(&det);
        }
        det = field.mul(&det, &rows[c][c]);
        let inv = field.inv(&rows[c][c]);
        let (top, rest) = rows.split_at_mut(c + 1);
        let pivot_row = &top[c];
        for row in rest.iter_mut() {
            let factor = field.mul(&row[c], &inv);
            if factor == 0 {
                continue;
            }
            let neg = p - factor;
            for (v, &pv) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *v = field.mul_add(*v, neg, pv);
            }
        }
    }
    det
}
