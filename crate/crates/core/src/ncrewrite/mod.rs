//! Noncommutative q-commutation rewriting in the collar algebra, the 2x2
//! matrix calculus for `theta_n(A)`, and the symbolic assembly of the
//! torsion family `e^{(n)}`.

mod algebra;
mod matrix;
mod verify;

pub use algebra::{
    collar_algebra, exterior_algebra, NcAlgebraSpec, NcElement, Strategy, Word, COLLAR_GENERATORS,
    EXTERIOR_GENERATORS,
};
pub use matrix::{commutation_matrix, theta_closed_form, theta_of_matrix, Mat2Poly};
pub use verify::{
    derive_e_n, e_n_formula, e_one_reduced, verify_commute_many, CommuteManyReport,
    DeriveReport, Mutation, Outcome, Route,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NcError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("rewrite rule is not order-decreasing: {0}")]
    RuleNotDecreasing(String),
    #[error("n = {0} is out of range (need n >= 1)")]
    OutOfRange(usize),
}
