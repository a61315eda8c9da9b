//! Exact scalars and the integer linear algebra behind every decision.

mod lattice;
mod monomial;

use thiserror::Error;

pub use lattice::{
    apply_multiplicative, determinant, gcd_reducer, mat_mul, solve_integer_affine,
    solve_multiplicative_system, unimodular_inverse, AffineSolution, Obstruction,
};
pub use monomial::{Monomial, Param};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("non-monomial result: {0}")]
    NonMonomial(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
}

/// A group element `y_1^{z_1} ⋯ y_s^{z_s}` of a free abelian group of rank `s`,
/// stored additively.
pub type ExponentVector = Vec<i64>;

/// Evaluates a character given by its values on the generators at an element.
pub fn evaluate(character: &[Monomial], element: &[i64]) -> Monomial {
    character.iter().zip(element).map(|(c, &e)| c.pow(e)).product()
}
