//! Exact and numerical machinery for torsion in the Kauffman bracket skein
//! module of a four-tangle Montesinos knot exterior.
//!
//! * [`ring`]: `Z[q^{+-1/2}]` and commutative polynomials over it.
//! * [`cheby`]: the Chebyshev families and the identities built from them.
//! * [`ncrewrite`]: the q-commutation algebra of the collar, its 2x2 matrix
//!   calculus, and the symbolic derivation of the torsion family.
//! * [`skein`]: the skein algebra of a holed disk via exact diagrams and state sums.
//! * [`chvar`]: SL(2,C) trace calculus and the one-parameter character curve.
//! * [`suite`]: verification reports, configuration and fixture handling.

pub mod cheby;
pub mod chvar;
pub mod ncrewrite;
pub mod ring;
pub mod skein;
pub mod suite;
