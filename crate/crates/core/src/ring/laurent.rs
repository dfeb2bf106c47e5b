use std::collections::BTreeMap;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::RingError;

/// An element of `Z[q^{1/2}, q^{-1/2}]`.
///
/// Exponents are stored as integer powers of `h = q^{1/2}`, so `q = h^2`.
/// Terms with zero coefficient are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentScalar {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn from_int(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * h^k`, i.e. `c * q^{k/2}`.
    pub fn monomial(c: impl Into<BigInt>, half_exp: i64) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(half_exp, c);
        }
        Self { terms }
    }

    /// `q^{k/2}`.
    pub fn h_pow(half_exp: i64) -> Self {
        Self::monomial(1, half_exp)
    }

    /// `q^k`.
    pub fn q_pow(k: i64) -> Self {
        Self::monomial(1, 2 * k)
    }

    pub fn q() -> Self {
        Self::q_pow(1)
    }

    pub fn qbar() -> Self {
        Self::q_pow(-1)
    }

    /// `alpha = q + q^{-1}`.
    pub fn alpha() -> Self {
        Self::q_pow(1) + Self::q_pow(-1)
    }

    /// `q^k - q^{-k}`.
    pub fn q_diff(k: i64) -> Self {
        Self::q_pow(k) - Self::q_pow(-k)
    }

    /// `q^k + q^{-k}`.
    pub fn q_sum(k: i64) -> Self {
        Self::q_pow(k) + Self::q_pow(-k)
    }

    pub fn from_terms<I, C>(iter: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (e, c) in iter {
            out.add_term(e, c.into());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, half_exp: i64) -> BigInt {
        self.terms.get(&half_exp).cloned().unwrap_or_default()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_term(&mut self, half_exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(half_exp).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&half_exp);
        }
    }

    /// Multiply by `h^k`.
    pub fn shift(&self, half_exp: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + half_exp, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Substitute `q^{1/2} := h` and sum.
    pub fn eval(&self, h: Complex64) -> Result<Complex64, RingError> {
        if h == Complex64::new(0.0, 0.0) {
            return Err(RingError::ZeroSubstitution);
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| h.powi(*e as i32) * c.to_f64().unwrap_or(f64::NAN))
            .sum())
    }

    /// The classical specialization `q^{1/2} = -1`.
    pub fn specialize_classical(&self) -> BigInt {
        self.terms
            .iter()
            .map(|(e, c)| if e.is_odd() { -c } else { c.clone() })
            .sum()
    }

    /// Exact quotient `self / den` in `Z[q^{+-1/2}]`, if it exists.
    pub fn div_exact(&self, den: &Self) -> Option<Self> {
        let den_min = den.min_exp()?;
        let Some(num_min) = self.min_exp() else {
            return Some(Self::zero());
        };
        // Normalize both to honest polynomials with nonzero constant term and
        // do schoolbook division from the top.
        let mut rem: BTreeMap<i64, BigInt> =
            self.terms.iter().map(|(e, c)| (e - num_min, c.clone())).collect();
        let d: Vec<(i64, BigInt)> = den.terms.iter().map(|(e, c)| (e - den_min, c.clone())).collect();
        let (d_top, d_lead) = d.last().cloned()?;
        let mut quot = Self::zero();
        while let Some((&top, lead)) = rem.iter().next_back() {
            if top < d_top {
                return None;
            }
            let (qc, r) = lead.div_rem(&d_lead);
            if !r.is_zero() {
                return None;
            }
            let shift = top - d_top;
            for (e, c) in &d {
                let slot = rem.entry(e + shift).or_default();
                *slot -= c * &qc;
                if slot.is_zero() {
                    rem.remove(&(e + shift));
                }
            }
            quot.add_term(shift, qc);
        }
        Some(quot.shift(num_min - den_min))
    }

    /// Invert the substitution `q^{1/2} -> q^{-1/2}`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }
}

impl fmt::Debug for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Terms ascending, each rendered as `c*q^{k/2}` with an explicit sign.
impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let sign = if c.is_negative() { '-' } else { '+' };
            write!(f, "{sign}{}*q^{{{e}/2}}", c.abs())?;
        }
        Ok(())
    }
}

impl FromStr for LaurentScalar {
    type Err = RingError;

    /// Parses the rendering produced by `Display`. Whitespace between the
    /// sign and the term is tolerated, as are bare integers.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || RingError::Parse(s.to_string());
        let mut out = Self::zero();
        let bytes = compact.as_bytes();
        let mut start = 0;
        while start < bytes.len() {
            let mut end = start + 1;
            while end < bytes.len() && bytes[end] != b'+' && bytes[end] != b'-' {
                end += 1;
            }
            // `q^{-1/2}` contains a minus inside the braces
            while end < bytes.len() && compact[start..end].matches('{').count() > compact[start..end].matches('}').count() {
                end += 1;
                while end < bytes.len() && bytes[end] != b'+' && bytes[end] != b'-' {
                    end += 1;
                }
            }
            let term = &compact[start..end];
            let (sign, body) = match term.as_bytes()[0] {
                b'+' => (1, &term[1..]),
                b'-' => (-1, &term[1..]),
                _ => (1, term),
            };
            let (coeff, exp) = match body.split_once('*') {
                Some((c, qpart)) => {
                    let inner = qpart
                        .strip_prefix("q^{")
                        .and_then(|r| r.strip_suffix("/2}"))
                        .ok_or_else(bad)?;
                    (c, inner.parse::<i64>().map_err(|_| bad())?)
                }
                None => (body, 0),
            };
            let c: BigInt = coeff.parse().map_err(|_| bad())?;
            out.add_term(exp, c * sign);
            start = end;
        }
        Ok(out)
    }
}

impl From<i64> for LaurentScalar {
    fn from(c: i64) -> Self {
        Self::from_int(c)
    }
}

impl Zero for LaurentScalar {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for LaurentScalar {
    fn one() -> Self {
        Self::monomial(1, 0)
    }
}

impl Neg for LaurentScalar {
    type Output = LaurentScalar;
    fn neg(mut self) -> Self::Output {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Neg for &LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> Self::Output {
        -self.clone()
    }
}

impl AddAssign<&LaurentScalar> for LaurentScalar {
    fn add_assign(&mut self, rhs: &LaurentScalar) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&LaurentScalar> for LaurentScalar {
    fn sub_assign(&mut self, rhs: &LaurentScalar) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c.clone());
        }
    }
}

impl MulAssign<&LaurentScalar> for LaurentScalar {
    fn mul_assign(&mut self, rhs: &LaurentScalar) {
        *self = &*self * rhs;
    }
}

impl Mul<&LaurentScalar> for &LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = LaurentScalar::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $assign:ident) => {
        impl $tr<&LaurentScalar> for LaurentScalar {
            type Output = LaurentScalar;
            fn $m(mut self, rhs: &LaurentScalar) -> LaurentScalar {
                self.$assign(rhs);
                self
            }
        }
        impl $tr<LaurentScalar> for LaurentScalar {
            type Output = LaurentScalar;
            fn $m(mut self, rhs: LaurentScalar) -> LaurentScalar {
                self.$assign(&rhs);
                self
            }
        }
        impl $tr<LaurentScalar> for &LaurentScalar {
            type Output = LaurentScalar;
            fn $m(self, rhs: LaurentScalar) -> LaurentScalar {
                let mut out = self.clone();
                out.$assign(&rhs);
                out
            }
        }
    };
}

forward_binop!(Add, add, add_assign);
forward_binop!(Sub, sub, sub_assign);
forward_binop!(Mul, mul, mul_assign);

impl Add<&LaurentScalar> for &LaurentScalar {
    type Output = LaurentScalar;
    fn add(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&LaurentScalar> for &LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign for LaurentScalar {
    fn add_assign(&mut self, rhs: LaurentScalar) {
        *self += &rhs;
    }
}

impl SubAssign for LaurentScalar {
    fn sub_assign(&mut self, rhs: LaurentScalar) {
        *self -= &rhs;
    }
}

impl Sum for LaurentScalar {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

impl Product for LaurentScalar {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |acc, x| acc * x)
    }
}
