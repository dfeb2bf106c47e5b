use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;
use rand::Rng;

use super::ChvarError;

pub type C = Complex64;

/// A 2x2 complex matrix.
pub type Mat2C = Matrix2<C>;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn identity() -> Mat2C {
    Mat2C::identity()
}

pub fn tr(m: &Mat2C) -> C {
    m.trace()
}

pub fn det(m: &Mat2C) -> C {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

/// Inverse of a determinant-one matrix via the adjugate.
pub fn inv_sl2(m: &Mat2C) -> Mat2C {
    Mat2C::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)])
}

/// Trace of a product of matrices.
pub fn tr_prod(ms: &[&Mat2C]) -> C {
    let mut p = identity();
    for m in ms {
        p *= *m;
    }
    p.trace()
}

pub fn random_complex<R: Rng>(rng: &mut R, radius: f64) -> C {
    c(rng.random_range(-radius..radius), rng.random_range(-radius..radius))
}

/// A random element of `SL(2, C)` with trace `t`.
pub fn random_with_trace<R: Rng>(rng: &mut R, t: C) -> Mat2C {
    loop {
        let p = random_complex(rng, 2.0);
        let q = random_complex(rng, 2.0);
        if q.norm() < 0.1 {
            continue;
        }
        let r = (p * (t - p) - 1.0) / q;
        return Mat2C::new(p, q, r, t - p);
    }
}

/// A random element of `SL(2, C)`.
pub fn random_sl2<R: Rng>(rng: &mut R) -> Mat2C {
    let t = random_complex(rng, 2.0);
    random_with_trace(rng, t)
}

/// Solve a 4x4 complex system, rejecting numerically singular matrices.
pub fn solve4(m: Matrix4<C>, rhs: Vector4<C>) -> Result<Vector4<C>, ChvarError> {
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let lu = m.lu();
    let d = lu.determinant();
    if d.norm() < 1e-12 * scale.powi(4) {
        return Err(ChvarError::Reducible);
    }
    lu.solve(&rhs).ok_or(ChvarError::Reducible)
}

/// `tr(a b a^-1 b^-1)`; equals 2 exactly when the pair has a common eigenvector.
pub fn commutator_trace(a: &Mat2C, b: &Mat2C) -> C {
    tr(&(a * b * inv_sl2(a) * inv_sl2(b)))
}
