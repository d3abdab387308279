use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::bareiss;
use super::field::{clear_denominators, Field, FieldConfig, FieldKind, PrimeField, Rationals};
use super::modular;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Entries {
    Rational(Vec<BigRational>),
    Modular(Vec<u64>),
}

/// A dense matrix over a configured exact field, stored row-major.
///
/// Prime-field entries are kept as canonical residues in `[0, p)`. Matrices are
/// immutable once built; every operation returns fresh data.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    field: FieldConfig,
    entries: Entries,
}

/// Fields whose elements can be stored in an [`ExactMatrix`].
pub trait MatrixField: Field {
    fn pack(&self, rows: usize, cols: usize, data: Vec<Self::Elem>) -> ExactMatrix;
}

impl MatrixField for Rationals {
    fn pack(&self, rows: usize, cols: usize, data: Vec<BigRational>) -> ExactMatrix {
        assert_eq!(data.len(), rows * cols);
        ExactMatrix {
            rows,
            cols,
            field: FieldConfig::rationals(),
            entries: Entries::Rational(data),
        }
    }
}

impl MatrixField for PrimeField {
    fn pack(&self, rows: usize, cols: usize, data: Vec<u64>) -> ExactMatrix {
        assert_eq!(data.len(), rows * cols);
        ExactMatrix {
            rows,
            cols,
            field: self.config(),
            entries: Entries::Modular(data),
        }
    }
}

impl ExactMatrix {
    /// Builds a matrix from rational entries, reducing them into `field`.
    ///
    /// Fails with [`Error::FieldIncompatible`] naming the first entry whose denominator
    /// vanishes modulo the prime.
    pub fn from_rationals(
        rows: usize,
        cols: usize,
        entries: Vec<BigRational>,
        field: FieldConfig,
    ) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        match field.kind {
            FieldKind::Rationals => Ok(Rationals.pack(rows, cols, entries)),
            FieldKind::PrimeField => {
                let p = field.prime.expect("prime field carries its prime");
                let f = PrimeField::new(p);
                let mut data = Vec::with_capacity(entries.len());
                for (idx, q) in entries.iter().enumerate() {
                    match f.from_rational(q) {
                        Some(v) => data.push(v),
                        None => {
                            return Err(Error::FieldIncompatible {
                                row: idx / cols.max(1),
                                col: idx % cols.max(1),
                                value: q.to_string(),
                                prime: p,
                            })
                        }
                    }
                }
                Ok(f.pack(rows, cols, data))
            }
        }
    }

    pub fn from_integers(
        rows: usize,
        cols: usize,
        entries: &[i64],
        field: FieldConfig,
    ) -> Result<Self> {
        let qs = entries
            .iter()
            .map(|&v| BigRational::from_integer(v.into()))
            .collect();
        Self::from_rationals(rows, cols, qs, field)
    }

    pub fn from_rows(cols: usize, rows: &[Vec<BigRational>], field: FieldConfig) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r.iter().cloned());
        }
        Self::from_rationals(rows.len(), cols, data, field)
    }

    pub fn zeros(rows: usize, cols: usize, field: FieldConfig) -> Self {
        match field.kind {
            FieldKind::Rationals => {
                Rationals.pack(rows, cols, vec![BigRational::zero(); rows * cols])
            }
            FieldKind::PrimeField => {
                PrimeField::new(field.prime.unwrap()).pack(rows, cols, vec![0; rows * cols])
            }
        }
    }

    pub fn identity(n: usize, field: FieldConfig) -> Self {
        let mut data = vec![BigRational::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = BigRational::one();
        }
        Self::from_rationals(n, n, data, field).expect("0/1 entries reduce in every field")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldConfig {
        self.field
    }

    /// Entry as a rational (canonical residue for prime fields).
    pub fn entry(&self, r: usize, c: usize) -> BigRational {
        let idx = r * self.cols + c;
        match &self.entries {
            Entries::Rational(v) => v[idx].clone(),
            Entries::Modular(v) => BigRational::from_integer(BigInt::from(v[idx])),
        }
    }

    pub fn row(&self, r: usize) -> Vec<BigRational> {
        (0..self.cols).map(|c| self.entry(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn transpose(&self) -> Self {
        let (r, c) = (self.rows, self.cols);
        let entries = match &self.entries {
            Entries::Rational(v) => {
                Entries::Rational((0..r * c).map(|i| v[(i % r) * c + i / r].clone()).collect())
            }
            Entries::Modular(v) => {
                Entries::Modular((0..r * c).map(|i| v[(i % r) * c + i / r]).collect())
            }
        };
        ExactMatrix {
            rows: c,
            cols: r,
            field: self.field,
            entries,
        }
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &ExactMatrix) -> Result<Self> {
        if self.cols != other.cols || self.field != other.field {
            return Err(Error::DimensionMismatch(format!(
                "cannot stack {}x{} over {} with {}x{} over {}",
                self.rows, self.cols, self.field, other.rows, other.cols, other.field
            )));
        }
        let entries = match (&self.entries, &other.entries) {
            (Entries::Rational(a), Entries::Rational(b)) => {
                Entries::Rational(a.iter().chain(b).cloned().collect())
            }
            (Entries::Modular(a), Entries::Modular(b)) => {
                Entries::Modular(a.iter().chain(b).copied().collect())
            }
            _ => unreachable!("field configs already compared"),
        };
        Ok(ExactMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            field: self.field,
            entries,
        })
    }

    /// `self * v`, computed in the matrix field.
    pub fn mul_vec(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        match &self.entries {
            Entries::Rational(data) => Ok(data
                .chunks(self.cols.max(1))
                .take(self.rows)
                .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
                .collect()),
            Entries::Modular(data) => {
                let f = PrimeField::new(self.field.prime.unwrap());
                let w = reduce_vector(&f, v)?;
                Ok(data
                    .chunks(self.cols.max(1))
                    .take(self.rows)
                    .map(|row| {
                        let s = row
                            .iter()
                            .zip(&w)
                            .fold(0u64, |acc, (&a, &b)| f.mul_add(acc, a, b));
                        f.to_rational(&s)
                    })
                    .collect())
            }
        }
    }

    /// Rank over the matrix field. Deterministic: pivots are the first nonzero entry in
    /// column order, with fraction-free elimination over the rationals.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        match &self.entries {
            Entries::Rational(data) => {
                let rows = self.integer_rows(data);
                bareiss::echelon(rows, self.cols).pivots.len()
            }
            Entries::Modular(data) => {
                let f = PrimeField::new(self.field.prime.unwrap());
                let mut rows: Vec<Vec<u64>> = data.chunks(self.cols).map(<[u64]>::to_vec).collect();
                modular::echelon(&f, &mut rows, self.cols).len()
            }
        }
    }

    /// A basis of the right kernel, `cols - rank` vectors, each scaled so that its first
    /// nonzero entry is 1.
    pub fn kernel_basis(&self) -> Vec<Vec<BigRational>> {
        match &self.entries {
            Entries::Rational(data) => {
                let (rows, pivots) = self.rational_rref(data);
                kernel_from_rref(&Rationals, &rows, &pivots, self.cols)
            }
            Entries::Modular(data) => {
                let f = PrimeField::new(self.field.prime.unwrap());
                let mut rows: Vec<Vec<u64>> = data
                    .chunks(self.cols.max(1))
                    .take(self.rows)
                    .map(<[u64]>::to_vec)
                    .collect();
                let pivots = rref(&f, &mut rows, self.cols);
                kernel_from_rref(&f, &rows, &pivots, self.cols)
                    .into_iter()
                    .map(|v| v.iter().map(|x| f.to_rational(x)).collect())
                    .collect()
            }
        }
    }

    /// Some `x` with `self * x = rhs`, or `None` when the system is inconsistent. Free
    /// variables are set to zero, so a unique solution is returned when one exists.
    pub fn solve(&self, rhs: &[BigRational]) -> Result<Option<Vec<BigRational>>> {
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                rhs.len(),
                self.rows
            )));
        }
        let cols = self.cols;
        let mut aug = Vec::with_capacity(self.rows * (cols + 1));
        for (r, b) in rhs.iter().enumerate() {
            aug.extend(self.row(r));
            aug.push(b.clone());
        }
        let augmented = ExactMatrix::from_rationals(self.rows, cols + 1, aug, self.field)?;
        match &augmented.entries {
            Entries::Rational(data) => {
                let (rows, pivots) = augmented.rational_rref(data);
                Ok(particular_solution(&Rationals, &rows, &pivots, cols))
            }
            Entries::Modular(data) => {
                let f = PrimeField::new(self.field.prime.unwrap());
                let mut rows: Vec<Vec<u64>> = data.chunks(cols + 1).map(<[u64]>::to_vec).collect();
                let pivots = rref(&f, &mut rows, cols + 1);
                Ok(particular_solution(&f, &rows, &pivots, cols)
                    .map(|x| x.iter().map(|v| f.to_rational(v)).collect()))
            }
        }
    }

    pub fn determinant(&self) -> Result<BigRational> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        match &self.entries {
            Entries::Rational(data) => {
                // Row scaling by the cleared denominators is undone afterwards.
                let mut scale = BigRational::one();
                let rows: Vec<Vec<BigInt>> = data
                    .chunks(self.cols.max(1))
                    .take(self.rows)
                    .map(|row| {
                        let ints = clear_denominators(row);
                        if let Some((q, z)) = row.iter().zip(&ints).find(|(q, _)| !q.is_zero()) {
                            scale *= BigRational::from_integer(z.clone()) / q;
                        }
                        ints
                    })
                    .collect();
                Ok(BigRational::from_integer(bareiss::determinant(rows)) / scale)
            }
            Entries::Modular(data) => {
                let f = PrimeField::new(self.field.prime.unwrap());
                let rows = data
                    .chunks(self.cols.max(1))
                    .take(self.rows)
                    .map(<[u64]>::to_vec)
                    .collect();
                Ok(f.to_rational(&modular::determinant(&f, rows)))
            }
        }
    }

    fn integer_rows(&self, data: &[BigRational]) -> Vec<Vec<BigInt>> {
        data.chunks(self.cols)
            .take(self.rows)
            .map(clear_denominators)
            .collect()
    }

    /// Fraction-free forward pass, then a rational backward pass on the pivot rows.
    fn rational_rref(&self, data: &[BigRational]) -> (Vec<Vec<BigRational>>, Vec<usize>) {
        if self.rows == 0 || self.cols == 0 {
            return (Vec::new(), Vec::new());
        }
        let ech = bareiss::echelon(self.integer_rows(data), self.cols);
        let mut rows: Vec<Vec<BigRational>> = ech
            .rows
            .into_iter()
            .map(|r| r.into_iter().map(BigRational::from_integer).collect())
            .collect();
        let pivots = rref(&Rationals, &mut rows, self.cols);
        debug_assert_eq!(pivots, ech.pivots);
        (rows, pivots)
    }
}

fn reduce_vector(f: &PrimeField, v: &[BigRational]) -> Result<Vec<u64>> {
    v.iter()
        .enumerate()
        .map(|(i, q)| {
            f.from_rational(q).ok_or_else(|| Error::FieldIncompatible {
                row: i,
                col: 0,
                value: q.to_string(),
                prime: f.modulus(),
            })
        })
        .collect()
}

/// Gauss-Jordan elimination to reduced row echelon form; rows beyond the rank are
/// dropped. Returns the pivot columns.
pub(crate) fn rref<F: Field>(f: &F, rows: &mut Vec<Vec<F::Elem>>, cols: usize) -> Vec<usize> {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let Some(found) = (r..nrows).find(|&i| !f.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(found, r);
        let inv = f.inv(&rows[r][c]);
        if inv != f.one() {
            for v in rows[r][c..].iter_mut() {
                *v = f.mul(v, &inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || f.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (v, pv) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if !f.is_zero(pv) {
                    *v = f.sub(v, &f.mul(&factor, pv));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub(crate) fn kernel_from_rref<F: Field>(
    f: &F,
    rows: &[Vec<F::Elem>],
    pivots: &[usize],
    cols: usize,
) -> Vec<Vec<F::Elem>> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&j| !is_pivot[j])
        .map(|free| {
            let mut v = vec![f.zero(); cols];
            v[free] = f.one();
            for (row, &pc) in rows.iter().zip(pivots) {
                v[pc] = f.neg(&row[free]);
            }
            let lead = v
                .iter()
                .find(|x| !f.is_zero(x))
                .cloned()
                .expect("free column is 1");
            let inv = f.inv(&lead);
            v.iter().map(|x| f.mul(x, &inv)).collect()
        })
        .collect()
}

fn particular_solution<F: Field>(
    f: &F,
    rows: &[Vec<F::Elem>],
    pivots: &[usize],
    cols: usize,
) -> Option<Vec<F::Elem>> {
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![f.zero(); cols];
    for (row, &pc) in rows.iter().zip(pivots) {
        x[pc] = row[cols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qv(v: &[i64]) -> Vec<BigRational> {
        v.iter()
            .map(|&x| BigRational::from_integer(x.into()))
            .collect()
    }

    fn zp() -> FieldConfig {
        FieldConfig::prime(1_000_003).unwrap()
    }

    #[test]
    fn identity_rank() {
        assert_eq!(ExactMatrix::identity(3, zp()).rank(), 3);
        assert_eq!(ExactMatrix::identity(3, FieldConfig::rationals()).rank(), 3);
    }

    #[test]
    fn zero_matrix_rank() {
        assert_eq!(ExactMatrix::zeros(5, 7, FieldConfig::rationals()).rank(), 0);
        assert_eq!(
            ExactMatrix::zeros(5, 7, FieldConfig::rationals())
                .kernel_basis()
                .len(),
            7
        );
    }

    #[test]
    fn quintic_power_hankel_has_rank_one() {
        // 3x4 Hankel of a = (1,0,0,0,0,0).
        let a = [1, 0, 0, 0, 0, 0];
        let entries: Vec<i64> = (0..3).flat_map(|i| (0..4).map(move |j| a[i + j])).collect();
        let m = ExactMatrix::from_integers(3, 4, &entries, FieldConfig::rationals()).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(ExactMatrix::identity(2, zp()).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_all_ones_row() {
        let m = ExactMatrix::from_integers(1, 3, &[1, 1, 1], zp()).unwrap();
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
            assert!(v.iter().find(|x| !x.is_zero()).unwrap().is_one());
        }
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let id = ExactMatrix::identity(2, FieldConfig::rationals());
        assert_eq!(id.solve(&qv(&[2, 3])).unwrap(), Some(qv(&[2, 3])));
        let col = ExactMatrix::from_integers(2, 1, &[1, 1], FieldConfig::rationals()).unwrap();
        assert_eq!(col.solve(&qv(&[1, 2])).unwrap(), None);
        assert!(col.solve(&qv(&[1])).is_err());
    }

    #[test]
    fn vandermonde_solve_round_trips() {
        for field in [FieldConfig::rationals(), zp()] {
            let nodes = [2i64, -3, 5];
            let entries: Vec<i64> = nodes.iter().flat_map(|&t| [1, t, t * t]).collect();
            let m = ExactMatrix::from_integers(3, 3, &entries, field).unwrap();
            let rhs = qv(&[7, -1, 4]);
            let x = m.solve(&rhs).unwrap().unwrap();
            let back = m.mul_vec(&x).unwrap();
            let expect = ExactMatrix::from_rows(
                1,
                &rhs.iter().map(|v| vec![v.clone()]).collect::<Vec<_>>(),
                field,
            )
            .unwrap()
            .to_rows()
            .concat();
            assert_eq!(back, expect);
        }
    }

    #[test]
    fn incompatible_entry_is_named() {
        let bad = vec![BigRational::one(), BigRational::new(1.into(), 7.into())];
        let err =
            ExactMatrix::from_rationals(1, 2, bad, FieldConfig::prime(7).unwrap()).unwrap_err();
        match err {
            Error::FieldIncompatible {
                row, col, prime, ..
            } => {
                assert_eq!((row, col, prime), (0, 1, 7));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rational_determinant_with_fractions() {
        let half = BigRational::new(1.into(), 2.into());
        let m = ExactMatrix::from_rationals(
            2,
            2,
            vec![
                half.clone(),
                BigRational::one(),
                BigRational::from_integer(3.into()),
                half,
            ],
            FieldConfig::rationals(),
        )
        .unwrap();
        assert_eq!(
            m.determinant().unwrap(),
            BigRational::new((-11).into(), 4.into())
        );
    }

    #[test]
    fn transpose_shape() {
        let m = ExactMatrix::from_integers(2, 3, &[1, 2, 3, 4, 5, 6], FieldConfig::rationals())
            .unwrap();
        let t = m.transpose();
        assert_eq!((t.rows(), t.cols()), (3, 2));
        assert_eq!(t.entry(2, 1), BigRational::from_integer(6.into()));
    }
}
