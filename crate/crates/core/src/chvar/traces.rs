use nalgebra::{DMatrix, Matrix4, Vector4};

use super::mat::{commutator_trace, det, identity, solve4, tr, C, Mat2C};
use super::ChvarError;

/// The Fricke polynomial `f(r1, r2, r3; r)` for three matrices of trace `t`.
pub fn fricke_f(r1: C, r2: C, r3: C, r: C, t: C) -> C {
    let s = r1 + r2 + r3;
    let t2 = t * t;
    r * r + t * (t2 - s) * r + t2 * (3.0 - s) + r1 * r1 + r2 * r2 + r3 * r3 + r1 * r2 * r3 - 4.0
}

/// The two roots of `f(t12, t13, t23; .)`.
#[derive(Clone, Copy, Debug)]
pub struct TripleRoots {
    pub roots: [C; 2],
    pub discriminant: C,
}

impl TripleRoots {
    /// A (numerically) double root: the two branches coincide.
    pub fn is_double(&self) -> bool {
        let scale = 1.0 + self.roots[0].norm().powi(2) + self.roots[1].norm().powi(2);
        self.discriminant.norm() < 1e-9 * scale
    }
}

pub fn solve_t123(t12: C, t13: C, t23: C, t: C) -> TripleRoots {
    let s = t12 + t13 + t23;
    let t2 = t * t;
    let b = t * (t2 - s);
    let c0 = t2 * (3.0 - s) + t12 * t12 + t13 * t13 + t23 * t23 + t12 * t13 * t23 - 4.0;
    let disc = b * b - 4.0 * c0;
    let sq = disc.sqrt();
    TripleRoots { roots: [(-b + sq) / 2.0, (-b - sq) / 2.0], discriminant: disc }
}

/// `t` is admissible as a meridian trace.
pub fn check_meridian_trace(t: C) -> Result<(), ChvarError> {
    if (t - 2.0).norm() < 1e-9 || (t + 2.0).norm() < 1e-9 {
        return Err(ChvarError::DegenerateTrace(format!("t = {t} is +-2")));
    }
    Ok(())
}

/// `s` avoids the reducible values `2` and `t^2 - 2`.
pub fn check_pair_trace(t: C, s: C) -> Result<(), ChvarError> {
    let tol = 1e-9 * (1.0 + s.norm());
    if (s - 2.0).norm() < tol || (s - (t * t - 2.0)).norm() < tol {
        return Err(ChvarError::DegenerateTrace(format!("pair trace {s} is reducible for t = {t}")));
    }
    Ok(())
}

/// Eigenvalue `lambda` with `lambda + 1/lambda = t`.
pub fn eigenvalue(t: C) -> C {
    (t + (t * t - 4.0).sqrt()) / 2.0
}

/// A pair `(a1, a2)` of trace-`t` matrices with `tr(a1 a2) = t12`: `a1` is
/// diagonal and `a2` has upper-right entry 1.
pub fn pair_with_traces(t: C, t12: C) -> Result<(Mat2C, Mat2C), ChvarError> {
    check_meridian_trace(t)?;
    check_pair_trace(t, t12)?;
    let l = eigenvalue(t);
    let li = 1.0 / l;
    let p = (t12 - t * li) / (l - li);
    let r = p * (t - p) - 1.0;
    let a1 = Mat2C::new(l, C::new(0.0, 0.0), C::new(0.0, 0.0), li);
    let a2 = Mat2C::new(p, C::new(1.0, 0.0), r, t - p);
    Ok((a1, a2))
}

/// The unique `a3` of trace `t` with `tr(a1 a3) = t13`, `tr(a2 a3) = t23` and
/// `tr(a1 a2 a3) = t123`, written in the basis `e, a1, a2, a1 a2`.
pub fn third_with_traces(a1: &Mat2C, a2: &Mat2C, t: C, t13: C, t23: C, t123: C) -> Result<Mat2C, ChvarError> {
    let a12 = a1 * a2;
    let basis = [identity(), *a1, *a2, a12];
    let probes = [identity(), *a1, *a2, a12];
    let m = Matrix4::from_fn(|i, j| tr(&(probes[i] * basis[j])));
    let coeffs = solve4(m, Vector4::new(t, t13, t23, t123))?;
    let a3 = basis.iter().zip(coeffs.iter()).fold(Mat2C::zeros(), |acc, (b, k)| acc + b * *k);
    let d = det(&a3);
    if (d - 1.0).norm() > 1e-6 {
        return Err(ChvarError::DeterminantOff((d - 1.0).norm()));
    }
    Ok(a3)
}

fn pair_traces(u: &Mat2C, v: &Mat2C) -> [C; 3] {
    [tr(u), tr(v), tr(&(u * v))]
}

/// `c` with `c u c^-1 = x`, `c v c^-1 = y` and `det c = 1`, from the kernel of
/// the linear system `c u = x c`, `c v = y c`.
pub fn conjugator(u: &Mat2C, v: &Mat2C, x: &Mat2C, y: &Mat2C) -> Result<Mat2C, ChvarError> {
    let (p, q) = (pair_traces(u, v), pair_traces(x, y));
    for (a, b) in p.iter().zip(q.iter()) {
        if (a - b).norm() > 1e-8 * (1.0 + a.norm()) {
            return Err(ChvarError::TraceMismatch(format!("{a} vs {b}")));
        }
    }
    for (a, b) in [(u, v), (x, y)] {
        if (commutator_trace(a, b) - 2.0).norm() < 1e-9 {
            return Err(ChvarError::Reducible);
        }
    }
    let mut k = DMatrix::<C>::zeros(8, 4);
    for col in 0..4 {
        let mut e = Mat2C::zeros();
        e[(col / 2, col % 2)] = C::new(1.0, 0.0);
        let r1 = e * u - x * e;
        let r2 = e * v - y * e;
        for i in 0..4 {
            k[(i, col)] = r1[(i / 2, i % 2)];
            k[(4 + i, col)] = r2[(i / 2, i % 2)];
        }
    }
    let svd = k.svd(false, true);
    let vt = svd.v_t.ok_or(ChvarError::Reducible)?;
    let (mut best, mut second) = (0usize, usize::MAX);
    for i in 1..4 {
        if svd.singular_values[i] < svd.singular_values[best] {
            best = i;
        }
    }
    for i in 0..4 {
        if i != best && (second == usize::MAX || svd.singular_values[i] < svd.singular_values[second]) {
            second = i;
        }
    }
    if svd.singular_values[second] < 1e-8 {
        return Err(ChvarError::Reducible);
    }
    // rows of v_t are conjugated right singular vectors
    let mut cm = Mat2C::from_fn(|i, j| vt[(best, 2 * i + j)].conj());
    let d = det(&cm);
    if d.norm() < 1e-12 {
        return Err(ChvarError::Reducible);
    }
    cm /= d.sqrt();
    Ok(cm)
}
