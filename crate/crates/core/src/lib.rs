//! Permutation index calculus on `S_d x A`, discriminant tables for
//! composita, Malle invariants and a small field census engine.

pub mod arith;
pub mod cli;
pub mod census;
pub mod error;
pub mod group;
pub mod index;
pub mod perm;
pub mod splitting;
pub mod verify;

pub use error::{Error, Result};

/// Exact rational used for every exponent and sign decision.
pub type Rational = num_rational::Ratio<i64>;
