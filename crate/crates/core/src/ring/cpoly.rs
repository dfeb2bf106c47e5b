use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::{LaurentScalar, RingError};

/// Exponent vector ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Self(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Self(vec![0; nvars])
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Self)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

/// Commutative polynomial over `Z[q^{+-1/2}]` in a fixed list of named
/// central variables.
#[derive(Clone, PartialEq, Eq)]
pub struct CPoly {
    vars: Arc<[String]>,
    terms: BTreeMap<Monomial, LaurentScalar>,
}

impl CPoly {
    pub fn zero(vars: &Arc<[String]>) -> Self {
        Self { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Arc<[String]>, c: LaurentScalar) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(Monomial::one(vars.len()), c);
        p
    }

    pub fn one(vars: &Arc<[String]>) -> Self {
        Self::constant(vars, LaurentScalar::one())
    }

    /// The variable with the given index.
    pub fn var(vars: &Arc<[String]>, idx: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        let mut p = Self::zero(vars);
        p.add_term(Monomial(e), LaurentScalar::one());
        p
    }

    pub fn var_named(vars: &Arc<[String]>, name: &str) -> Self {
        let idx = vars.iter().position(|v| v == name).expect("unknown variable");
        Self::var(vars, idx)
    }

    pub fn term(vars: &Arc<[String]>, exps: Vec<u32>, c: LaurentScalar) -> Self {
        assert_eq!(exps.len(), vars.len());
        let mut p = Self::zero(vars);
        p.add_term(Monomial(exps), c);
        p
    }

    pub fn vars(&self) -> &Arc<[String]> {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &LaurentScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> LaurentScalar {
        self.terms.get(&Monomial(exps.to_vec())).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<(&Monomial, &LaurentScalar)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: LaurentScalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, c: &LaurentScalar) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    fn check_vars(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars,
            "polynomials over different variable lists"
        );
    }

    /// Exact quotient `self / den`; errors if the division leaves a remainder.
    pub fn divide_exact(&self, den: &Self) -> Result<Self, RingError> {
        self.check_vars(den);
        let (dm, dc) = den.leading().ok_or(RingError::DivisionByZero)?;
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.vars);
        while let Some((m, c)) = rem.leading() {
            let qm = m.div(dm).ok_or(RingError::NonExactDivision)?;
            let qc = c.div_exact(dc).ok_or(RingError::NonExactDivision)?;
            let t = Self::term(&self.vars, qm.0, qc);
            rem = &rem - &(&t * den);
            quot = &quot + &t;
        }
        Ok(quot)
    }

    /// Apply `f` to every coefficient, dropping zeros.
    pub fn map_coeffs(&self, f: impl Fn(&LaurentScalar) -> LaurentScalar) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Evaluate numerically at `q^{1/2} = h` and the given variable values.
    pub fn eval(&self, h: Complex64, values: &[Complex64]) -> Result<Complex64, RingError> {
        assert_eq!(values.len(), self.vars.len());
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut v = c.eval(h)?;
            for (x, e) in values.iter().zip(m.exps()) {
                v *= x.powu(*e);
            }
            acc += v;
        }
        Ok(acc)
    }

    /// Evaluate at `q^{1/2} = -1` and the given variable values.
    pub fn eval_classical(&self, values: &[Complex64]) -> Complex64 {
        assert_eq!(values.len(), self.vars.len());
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut v = Complex64::new(c.specialize_classical().to_f64().unwrap_or(f64::NAN), 0.0);
            for (x, e) in values.iter().zip(m.exps()) {
                v *= x.powu(*e);
            }
            acc += v;
        }
        acc
    }

    /// Coefficientwise classical specialization `q^{1/2} = -1`, kept as a
    /// polynomial with integer (degree-zero Laurent) coefficients.
    pub fn specialize_classical(&self) -> Self {
        self.map_coeffs(|c| LaurentScalar::from_int(c.specialize_classical()))
    }

    /// The first monomial (in ascending order) where `self` and `other` differ.
    pub fn first_difference(&self, other: &Self) -> Option<(Monomial, LaurentScalar, LaurentScalar)> {
        let diff = self - other;
        diff.terms.iter().next().map(|(m, _)| {
            let a = self.terms.get(m).cloned().unwrap_or_default();
            let b = other.terms.get(m).cloned().unwrap_or_default();
            (m.clone(), a, b)
        })
    }
}

impl fmt::Debug for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (v, e) in self.vars.iter().zip(m.exps()) {
                match e {
                    0 => {}
                    1 => write!(f, "*{v}")?,
                    _ => write!(f, "*{v}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl Add<&CPoly> for &CPoly {
    type Output = CPoly;
    fn add(self, rhs: &CPoly) -> CPoly {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub<&CPoly> for &CPoly {
    type Output = CPoly;
    fn sub(self, rhs: &CPoly) -> CPoly {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul<&CPoly> for &CPoly {
    type Output = CPoly;
    fn mul(self, rhs: &CPoly) -> CPoly {
        self.check_vars(rhs);
        let mut out = CPoly::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &CPoly {
    type Output = CPoly;
    fn neg(self) -> CPoly {
        self.map_coeffs(|c| -c)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<CPoly> for CPoly {
            type Output = CPoly;
            fn $m(self, rhs: CPoly) -> CPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CPoly> for CPoly {
            type Output = CPoly;
            fn $m(self, rhs: &CPoly) -> CPoly {
                (&self).$m(rhs)
            }
        }
        impl $tr<CPoly> for &CPoly {
            type Output = CPoly;
            fn $m(self, rhs: CPoly) -> CPoly {
                self.$m(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for CPoly {
    type Output = CPoly;
    fn neg(self) -> CPoly {
        -&self
    }
}

/// Variable list helper.
pub fn var_list(names: &[&str]) -> Arc<[String]> {
    names.iter().map(|s| s.to_string()).collect::<Vec<_>>().into()
}

#[cfg(test)]
mod tests {
    use super::*;

    type L = LaurentScalar;

    fn x_vars() -> Arc<[String]> {
        var_list(&["x"])
    }

    fn x2_minus_alpha2(v: &Arc<[String]>) -> CPoly {
        let x = CPoly::var(v, 0);
        &(&x * &x) - &CPoly::constant(v, L::alpha() * L::alpha())
    }

    #[test]
    fn self_division() {
        let v = x_vars();
        let d = x2_minus_alpha2(&v);
        assert_eq!(d.divide_exact(&d).unwrap(), CPoly::one(&v));
    }

    #[test]
    fn scalar_multiple_division() {
        let v = x_vars();
        let d = x2_minus_alpha2(&v);
        let num = d.scale(&L::q_diff(1));
        assert_eq!(num.divide_exact(&d).unwrap(), CPoly::constant(&v, L::q_diff(1)));
    }

    #[test]
    fn non_exact_division_is_reported() {
        let v = x_vars();
        let d = x2_minus_alpha2(&v);
        let num = &d + &CPoly::one(&v);
        assert!(matches!(num.divide_exact(&d), Err(RingError::NonExactDivision)));
        assert!(matches!(num.divide_exact(&CPoly::zero(&v)), Err(RingError::DivisionByZero)));
    }

    #[test]
    fn graded_lex_order() {
        let a = Monomial::new(vec![2, 0]);
        let b = Monomial::new(vec![0, 3]);
        let c = Monomial::new(vec![1, 1]);
        assert!(a < b);
        assert!(c < a);
    }

    #[test]
    fn multivariate_division() {
        let v = var_list(&["x", "r"]);
        let x = CPoly::var(&v, 0);
        let r = CPoly::var(&v, 1);
        let a = &(&x * &r) + &CPoly::constant(&v, L::q());
        let b = &(&r - &x) + &CPoly::constant(&v, L::alpha());
        assert_eq!((&a * &b).divide_exact(&b).unwrap(), a);
        assert_eq!((&a * &b).divide_exact(&a).unwrap(), b);
    }
}
