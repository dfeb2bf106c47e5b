//! Exact arithmetic in `Z[q^{+-1/2}]` and commutative polynomial rings over it.

mod cpoly;
mod laurent;

pub use cpoly::{var_list, CPoly, Monomial};
pub use laurent::LaurentScalar;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("cannot substitute q^(1/2) = 0")]
    ZeroSubstitution,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("division is not exact")]
    NonExactDivision,
    #[error("cannot parse Laurent polynomial `{0}`")]
    Parse(String),
}
