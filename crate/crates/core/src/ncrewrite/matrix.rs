use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::cheby::{gamma, gamma_prev, x_vars};
use crate::ring::{CPoly, LaurentScalar};

type L = LaurentScalar;

/// A 2x2 matrix with entries in a commutative polynomial ring.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat2Poly {
    pub e: [[CPoly; 2]; 2],
}

impl Mat2Poly {
    pub fn new(a: CPoly, b: CPoly, c: CPoly, d: CPoly) -> Self {
        Self { e: [[a, b], [c, d]] }
    }

    pub fn scalar_identity(c: L) -> Self {
        let v = x_vars();
        Self::new(CPoly::constant(&v, c.clone()), CPoly::zero(&v), CPoly::zero(&v), CPoly::constant(&v, c))
    }

    pub fn identity() -> Self {
        Self::scalar_identity(L::one())
    }

    /// First entry (row, column, both 0-based) where the matrices differ.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize, String)> {
        for i in 0..2 {
            for j in 0..2 {
                if let Some((m, a, b)) = self.e[i][j].first_difference(&other.e[i][j]) {
                    return Some((i, j, format!("x-degree {:?}: {a} vs {b}", m.exps())));
                }
            }
        }
        None
    }
}

impl fmt::Debug for Mat2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.e[0][0], self.e[0][1], self.e[1][0], self.e[1][1])
    }
}

impl Add<&Mat2Poly> for &Mat2Poly {
    type Output = Mat2Poly;
    fn add(self, rhs: &Mat2Poly) -> Mat2Poly {
        let f = |i: usize, j: usize| &self.e[i][j] + &rhs.e[i][j];
        Mat2Poly::new(f(0, 0), f(0, 1), f(1, 0), f(1, 1))
    }
}

impl Sub<&Mat2Poly> for &Mat2Poly {
    type Output = Mat2Poly;
    fn sub(self, rhs: &Mat2Poly) -> Mat2Poly {
        let f = |i: usize, j: usize| &self.e[i][j] - &rhs.e[i][j];
        Mat2Poly::new(f(0, 0), f(0, 1), f(1, 0), f(1, 1))
    }
}

impl Mul<&Mat2Poly> for &Mat2Poly {
    type Output = Mat2Poly;
    fn mul(self, rhs: &Mat2Poly) -> Mat2Poly {
        let f = |i: usize, j: usize| &(&self.e[i][0] * &rhs.e[0][j]) + &(&self.e[i][1] * &rhs.e[1][j]);
        Mat2Poly::new(f(0, 0), f(0, 1), f(1, 0), f(1, 1))
    }
}

/// `A = [[q^2 x, q - q^-3], [q^-1 - q^3, q^-2 x]]`, the matrix of left
/// multiplication by `x` on the pair `(v, v')`.
pub fn commutation_matrix() -> Mat2Poly {
    let v = x_vars();
    let x = CPoly::var(&v, 0);
    Mat2Poly::new(
        x.scale(&L::q_pow(2)),
        CPoly::constant(&v, L::q() - L::q_pow(-3)),
        CPoly::constant(&v, L::qbar() - L::q_pow(3)),
        x.scale(&L::q_pow(-2)),
    )
}

/// `theta_n(A)` by the recursion `T_{n+1} = A T_n - T_{n-1}`, `T_0 = 2`, `T_1 = A`.
pub fn theta_of_matrix(a: &Mat2Poly, n: usize) -> Mat2Poly {
    let mut prev = Mat2Poly::scalar_identity(L::from_int(2));
    if n == 0 {
        return prev;
    }
    let mut cur = a.clone();
    for _ in 1..n {
        let next = &(a * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// The closed form of `theta_n(A)` built from the `gamma` family.
pub fn theta_closed_form(n: usize) -> Mat2Poly {
    if n == 0 {
        return Mat2Poly::scalar_identity(L::from_int(2));
    }
    let k = n as i64;
    let (up, down) = (L::q_pow(2 * k), L::q_pow(-2 * k));
    let diff = &up - &down;
    let (g_next, g, g_prev) = (gamma(n + 1), gamma(n), gamma_prev(n));
    Mat2Poly::new(
        &g_next.scale(&up) - &g_prev.scale(&down),
        g.scale(&(L::qbar() * &diff)),
        g.scale(&-(L::q() * &diff)),
        &g_next.scale(&down) - &g_prev.scale(&up),
    )
}
