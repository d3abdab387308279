//! Monomial bases, forms, Veronese evaluation and tangent rows, power sums and
//! catalecticant matrices.
//!
//! Monomials of a fixed degree are ordered graded-lexicographically with exponent
//! vectors decreasing, so `x0^d` is first and `xn^d` last. Every matrix column in the
//! crate follows this order.

pub(crate) mod exact;
mod form;
mod monomial;
mod point;
mod rows;

pub use exact::parse_rational;
pub use form::Form;
pub use monomial::{binomial, monomial_basis, space_dim, MonomialBasis, MultiIndex};
pub use point::ProjPoint;
pub(crate) use rows::pack_rows;
pub use rows::{
    catalecticant, catalecticant_entries, catalecticant_in, derivative_row, derivative_row_in,
    evaluation_row, evaluation_row_in, power_sum_expand,
};
