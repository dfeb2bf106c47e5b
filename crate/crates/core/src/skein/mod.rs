//! The Kauffman bracket skein algebra of an `n`-holed disk.
//!
//! Diagrams are closed polylines with exact rational vertices on a board
//! whose holes sit at `(i, 0)`. Resolution runs the state sum and reads
//! every resulting loop as a word in the free group on the holes, cut along
//! the upward rays `x = i, y > 0`. A basis element is a multiset of free
//! homotopy classes of disjoint simple loops.

mod algebra;
mod canonical;
mod diagram;
mod element;
mod epsilon;
mod fixture;
mod geom;
mod resolve;
mod word;

pub use algebra::SkeinAlgebra;
pub use canonical::{canonical_diagram, has_canonical_diagram};
pub use diagram::{place, scale_about, Board, Crossing, Curve, Diagram, RawCrossing, StrandRef};
pub use element::{check_laminar, Multicurve, SkeinElement};
pub use epsilon::{
    epsilon_of_class, epsilon_of_diagram, epsilon_of_element, epsilon_of_multicurve, epsilon_of_word, word_matrix,
};
pub use fixture::{
    emit_fixture_templates, slot_path, template, template_names, verify_fixture, verify_fixture_dir,
    verify_skein_identity, FixtureStatus, FixtureTerm, IdentityReport, IdentitySpec, IDENTITY_FILE,
};
pub use geom::{fmt_q, q, qi, ray_letters, segment_contact, Contact, Point, Q};
pub use resolve::{resolve, resolve_capped, Resolver, DEFAULT_STATE_CAP};
pub use word::{cyclic_reduce, free_reduce, inverse, parse_class, CurveClass};

use thiserror::Error;

fn at_line(line: usize, msg: &str) -> String {
    if line == 0 {
        msg.to_string()
    } else {
        format!("line {line}: {msg}")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkeinError {
    #[error("{}", at_line(*line, msg))]
    Parse { line: usize, msg: String },
    #[error("{}", at_line(*line, msg))]
    Diagram { line: usize, msg: String },
    #[error("diagram is marked untranscribed")]
    Untranscribed,
    #[error("a component has {crossings} crossings, above the state cap {cap}")]
    StateCap { crossings: usize, cap: usize },
    #[error("enclosed sets are not laminar: {0}")]
    NotLaminar(String),
    #[error("a multicurve cannot contain a trivial loop")]
    TrivialComponent,
    #[error("bad curve class `{0}`")]
    BadClass(String),
    #[error("no comb drawing: {0}")]
    NotCanonical(String),
    #[error("no drawing known for {0}; resolve a diagram producing it first")]
    NoRepresentative(String),
    #[error("no general-position perturbation found: {0}")]
    Perturbation(String),
    #[error("board mismatch: expected {expected} holes, found {found}")]
    BoardMismatch { expected: usize, found: usize },
    #[error("{0}")]
    Io(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}
