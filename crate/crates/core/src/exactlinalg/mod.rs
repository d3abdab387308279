//! Exact dense linear algebra over the rationals and over prime fields.
//!
//! Rank over `Q` uses fraction-free (Bareiss) elimination on the row-wise integer
//! rescaling of the matrix; over `Z/pZ` plain elimination with residues in `u64`.
//! Pivoting is deterministic, so identical inputs give identical outputs.

mod bareiss;
mod field;
mod matrix;
mod modular;

pub use field::{
    clear_denominators, is_prime, primitive_integer_vector, Field, FieldConfig, FieldKind,
    PrimeField, Rationals, DEFAULT_PRIME, MIN_DEFAULT_PRIME, RETRY_PRIME,
};
pub(crate) use matrix::{kernel_from_rref, rref};
pub use matrix::{ExactMatrix, MatrixField};

use num_rational::BigRational;

use crate::error::Result;

pub fn rank(m: &ExactMatrix) -> usize {
    m.rank()
}

pub fn kernel_basis(m: &ExactMatrix) -> Vec<Vec<BigRational>> {
    m.kernel_basis()
}

pub fn solve(m: &ExactMatrix, rhs: &[BigRational]) -> Result<Option<Vec<BigRational>>> {
    m.solve(rhs)
}
