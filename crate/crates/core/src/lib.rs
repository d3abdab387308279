//! Verification toolkit for interpolation at general double points.
//!
//! The crate computes Hilbert functions of unions of double points (and related
//! zero-dimensional schemes) by exact rank, hence dimensions of secant varieties of
//! Veronese varieties; builds exact witnesses for the defective cases; checks the
//! arithmetic of the Horace-style induction through certificates; and decomposes odd
//! degree binary forms as sums of powers.

pub mod error;
pub mod exactlinalg;
pub mod interpolation;
pub mod polyspace;
pub mod schemes;
pub mod sylvester;
pub mod verifier;
pub mod witness;

pub use error::{Error, Result};
