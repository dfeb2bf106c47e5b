//! SL(2,C) trace calculus: the Fricke relation, prescribed-trace
//! constructions, 2-bridge representations, the one-parameter family of
//! characters `(x_1, ..., x_4)` and classical values of the torsion elements.

mod bridge;
mod epsilon;
mod mat;
mod traces;
mod x1;

pub use bridge::{bridge_representation, bridge_signs, relator_polynomials, BridgeRep, PolyC};
pub use epsilon::{
    epsilon_basics, epsilon_torsion_elements, evaluate_point, format_complex, nonvanishing_scan, quadratic_roots,
    render_scan, summarize, vanishing_locus, vanishing_quadratic, BranchEval, ClassicalKappa, EpsilonBasics,
    PointEval, ScanConfig, ScanPoint, ScanReport, ScanSummary, TScan, TorsionEval, RATIO_TOL, ZERO_TOL,
};
pub use mat::{
    c, commutator_trace, det, identity, inv_sl2, random_complex, random_sl2, random_with_trace, tr, tr_prod, Mat2C,
    C,
};
pub use traces::{
    check_meridian_trace, check_pair_trace, conjugator, eigenvalue, fricke_f, pair_with_traces, solve_t123,
    third_with_traces, TripleRoots,
};
pub use x1::{
    branch_roots, branches_distinct, build_all_branches, build_x1_point, tangle_traces, BuildOptions, ReprPoint,
    Tangle, TraceData, ALL_BRANCHES,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChvarError {
    #[error("degenerate trace: {0}")]
    DegenerateTrace(String),
    #[error("reducible pair (singular linear system)")]
    Reducible,
    #[error("determinant off by {0:e}; the Fricke constraint is violated")]
    DeterminantOff(f64),
    #[error("trace mismatch: {0}")]
    TraceMismatch(String),
    #[error("non-generic input: {0}")]
    NonGeneric(String),
    #[error("2-bridge input: {0}")]
    Bridge(String),
    #[error("constraint residual {0:e} exceeds tolerance")]
    ConstraintViolated(f64),
    #[error("every scanned value vanished; check the configuration")]
    AllZero,
    #[error("configuration: {0}")]
    Config(String),
}

/// Largest `|f|` on the traces of random triples in `G(t)`, over `t_count`
/// random `t` with `trials` triples each.
pub fn fricke_trials(trials: usize, t_count: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..t_count {
        let t = random_complex(&mut rng, 2.0);
        for _ in 0..trials {
            let a: Vec<Mat2C> = (0..3).map(|_| random_with_trace(&mut rng, t)).collect();
            let f = fricke_f(
                tr(&(a[0] * a[1])),
                tr(&(a[0] * a[2])),
                tr(&(a[1] * a[2])),
                tr(&(a[0] * a[1] * a[2])),
                t,
            );
            worst = worst.max(f.norm());
        }
    }
    worst
}
