//! Fraction-free elimination over the integers.
//!
//! Every intermediate entry is a minor of the input matrix, so all divisions by the
//! previous pivot are exact and coefficient growth stays polynomial.

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub(crate) struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    /// Number of row swaps performed.
    pub swaps: usize,
}

/// Reduces `rows` to row echelon form in place. Pivot choice: first nonzero entry at
/// or below the current row, scanning columns left to right.
pub(crate) fn echelon(mut rows: Vec<Vec<BigInt>>, cols: usize) -> Echelon {
    let nrows = rows.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut r = 0;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let Some(found) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        if found != r {
            rows.swap(found, r);
            swaps += 1;
        }
        let (top, rest) = rows.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in rest.iter_mut() {
            let factor = std::mem::take(&mut row[c]);
            if factor.is_zero() {
                for v in row[c + 1..].iter_mut() {
                    if !v.is_zero() {
                        *v = (&*v * pivot) / &prev;
                    }
                }
            } else {
                for (v, pv) in row[c + 1..].iter_mut().zip(&pivot_row[c + 1..]) {
                    *v = (&*v * pivot - &factor * pv) / &prev;
                }
            }
        }
        prev = pivot.clone();
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    Echelon {
        rows,
        pivots,
        swaps,
    }
}

/// Determinant of a square integer matrix.
pub(crate) fn determinant(rows: Vec<Vec<BigInt>>) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let e = echelon(rows, n);
    if e.pivots.len() < n {
        return BigInt::zero();
    }
    let det = e.rows[n - 1][n - 1].clone();
    if e.swaps % 2 == 1 {
        -det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn rank_deficient_columns_are_skipped() {
        let e = echelon(m(&[&[0, 1, 2], &[0, 2, 4], &[0, 3, 7]]), 3);
        assert_eq!(e.pivots, vec![1, 2]);
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(m(&[&[2, 0], &[0, 3]])), BigInt::from(6));
        assert_eq!(determinant(m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(
            determinant(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])),
            BigInt::from(-3)
        );
        assert_eq!(determinant(m(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }
}
