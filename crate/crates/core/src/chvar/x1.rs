use super::bridge::{bridge_representation, BridgeRep};
use super::mat::{det, identity, inv_sl2, tr, tr_prod, C, Mat2C};
use super::traces::{
    check_meridian_trace, check_pair_trace, conjugator, pair_with_traces, solve_t123, third_with_traces, TripleRoots,
};
use super::ChvarError;

/// One of the four rational tangles: either a fraction `a/b` whose 2-bridge
/// closure supplies the trace `s`, or a prescribed `s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Tangle {
    Fraction(i64, i64),
    Trace(C),
}

impl std::str::FromStr for Tangle {
    type Err = ChvarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ChvarError::Bridge(format!("cannot parse tangle `{s}`"));
        let (a, b) = s.trim().split_once('/').ok_or_else(bad)?;
        Ok(Tangle::Fraction(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
    }
}

/// Trace parameters of a point of the curve.
#[derive(Clone, Copy, Debug)]
pub struct TraceData {
    pub t: C,
    pub s: [C; 4],
    pub b: C,
}

impl TraceData {
    pub fn new(t: C, s: [C; 4], b: C) -> Result<Self, ChvarError> {
        check_meridian_trace(t)?;
        for si in s {
            check_pair_trace(t, si)?;
        }
        check_pair_trace(t, b)?;
        Ok(Self { t, s, b })
    }

    /// `t_{i-1,i} = t^2 - s_i` for `i = 1..4` (indices mod 4, 1-based).
    pub fn adjacent(&self, i: usize) -> C {
        self.t * self.t - self.s[(i + 3) % 4]
    }
}

/// Resolve each tangle to its trace `s_i` at meridian trace `t`, taking the
/// first irreducible 2-bridge representation in the sorted list.
pub fn tangle_traces(tangles: &[Tangle; 4], t: C) -> Result<[C; 4], ChvarError> {
    let mut out = [C::new(0.0, 0.0); 4];
    for (slot, tangle) in out.iter_mut().zip(tangles) {
        *slot = match *tangle {
            Tangle::Trace(s) => s,
            Tangle::Fraction(a, b) => bridge_representation(a, b, t)?[0].s,
        };
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct BuildOptions {
    /// Accept double roots of the Fricke quadratics (the branch locus).
    pub allow_branch_locus: bool,
}

/// A quadruple `(x_1, ..., x_4)` of trace-`t` matrices on the curve.
#[derive(Clone, Debug)]
pub struct ReprPoint {
    pub x: [Mat2C; 4],
    pub data: TraceData,
    pub branches: (bool, bool),
    /// Largest residual among the validated trace and determinant constraints.
    pub residual: f64,
}

fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / (1.0 + b.norm())
}

impl ReprPoint {
    /// `x_i` for any integer `i`, read mod 4 with `x_0 = x_4`.
    pub fn xm(&self, i: i64) -> &Mat2C {
        &self.x[(i - 1).rem_euclid(4) as usize]
    }

    pub fn t2(&self, i: i64, j: i64) -> C {
        tr_prod(&[self.xm(i), self.xm(j)])
    }

    pub fn t3(&self, i: i64, j: i64, k: i64) -> C {
        tr_prod(&[self.xm(i), self.xm(j), self.xm(k)])
    }

    /// Conjugate every `x_i` by `g`.
    pub fn conjugated(&self, g: &Mat2C) -> ReprPoint {
        let gi = inv_sl2(g);
        let mut p = self.clone();
        for m in p.x.iter_mut() {
            *m = g * *m * gi;
        }
        p
    }

    /// Relative residuals of all defining constraints.
    pub fn constraint_residual(&self) -> f64 {
        let d = &self.data;
        let mut worst: f64 = 0.0;
        for i in 1..=4 {
            worst = worst.max(rel(tr(self.xm(i)), d.t));
            worst = worst.max((det(self.xm(i)) - 1.0).norm());
            worst = worst.max(rel(self.t2(i - 1, i), d.adjacent(i as usize)));
        }
        worst.max(rel(self.t2(2, 4), d.b))
    }

    /// `tr(x_2^-1 x_4)`, which should equal `t^2 - b`.
    pub fn inverse_pair_trace(&self) -> C {
        tr(&(inv_sl2(self.xm(2)) * self.xm(4)))
    }

    /// The two invariants separating the four branches.
    pub fn branch_signature(&self) -> (C, C) {
        (self.t3(1, 2, 4), self.t3(2, 3, 4))
    }

    /// Conjugate a tangle representation onto the pair `(x_{i-1}, x_i)`;
    /// `u` goes to `x_{i-1}` and `v^-1` to `x_i`.
    pub fn glue(&self, i: i64, rep: &BridgeRep) -> Result<Mat2C, ChvarError> {
        let vi = identity() * self.data.t - rep.v;
        conjugator(&rep.u, &vi, self.xm(i - 1), self.xm(i))
    }
}

/// The Fricke roots governing `x_1` (`first`) and `x_3`.
pub fn branch_roots(d: &TraceData) -> (TripleRoots, TripleRoots) {
    (solve_t123(d.b, d.adjacent(2), d.adjacent(1), d.t), solve_t123(d.b, d.adjacent(3), d.adjacent(4), d.t))
}

/// Build `(x_1, ..., x_4)`: `(x_2, x_4)` from `tr(x_2 x_4) = b`, then `x_1` and
/// `x_3` from the chosen Fricke roots.
pub fn build_x1_point(d: &TraceData, branches: (bool, bool), opts: BuildOptions) -> Result<ReprPoint, ChvarError> {
    let (x2, x4) = pair_with_traces(d.t, d.b)?;
    let (r1, r3) = branch_roots(d);
    if !opts.allow_branch_locus && (r1.is_double() || r3.is_double()) {
        return Err(ChvarError::NonGeneric(format!("b = {} lies on the branch locus", d.b)));
    }
    let x1 = third_with_traces(&x2, &x4, d.t, d.adjacent(2), d.adjacent(1), r1.roots[branches.0 as usize])?;
    let x3 = third_with_traces(&x2, &x4, d.t, d.adjacent(3), d.adjacent(4), r3.roots[branches.1 as usize])?;
    let mut p = ReprPoint { x: [x1, x2, x3, x4], data: *d, branches, residual: 0.0 };
    p.residual = p.constraint_residual().max(rel(p.inverse_pair_trace(), d.t * d.t - d.b));
    let tol = if opts.allow_branch_locus { 1e-6 } else { 1e-9 };
    if p.residual > tol {
        return Err(ChvarError::ConstraintViolated(p.residual));
    }
    Ok(p)
}

pub const ALL_BRANCHES: [(bool, bool); 4] = [(false, false), (false, true), (true, false), (true, true)];

/// All four branches at once.
pub fn build_all_branches(d: &TraceData) -> Result<Vec<ReprPoint>, ChvarError> {
    ALL_BRANCHES.iter().map(|&br| build_x1_point(d, br, BuildOptions::default())).collect()
}

/// The four branches have pairwise distinct signatures.
pub fn branches_distinct(points: &[ReprPoint]) -> bool {
    let sig: Vec<(C, C)> = points.iter().map(ReprPoint::branch_signature).collect();
    for i in 0..sig.len() {
        for j in i + 1..sig.len() {
            let gap = (sig[i].0 - sig[j].0).norm() + (sig[i].1 - sig[j].1).norm();
            if gap < 1e-6 {
                return false;
            }
        }
    }
    true
}
