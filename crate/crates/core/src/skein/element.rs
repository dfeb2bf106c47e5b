use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::ring::LaurentScalar;

use super::word::{parse_class, CurveClass};
use super::SkeinError;

/// Two enclosed-hole sets are laminar if nested or disjoint.
fn laminar_pair(a: &[usize], b: &[usize]) -> bool {
    let inter = a.iter().filter(|x| b.contains(x)).count();
    inter == 0 || inter == a.len() || inter == b.len()
}

/// Check that the enclosed sets of a family of loops are pairwise laminar.
pub fn check_laminar(classes: &[CurveClass]) -> Result<(), SkeinError> {
    let sets: Vec<Vec<usize>> = classes.iter().map(|c| c.enclosed()).collect();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if !laminar_pair(&sets[i], &sets[j]) {
                return Err(SkeinError::NotLaminar(format!("{} and {}", classes[i], classes[j])));
            }
        }
    }
    Ok(())
}

/// A basis element: a multiset of nontrivial curve classes with laminar
/// enclosed sets. Components are kept sorted.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Multicurve {
    classes: Vec<CurveClass>,
}

impl Multicurve {
    pub fn empty() -> Self {
        Self { classes: Vec::new() }
    }

    pub fn new(mut classes: Vec<CurveClass>) -> Result<Self, SkeinError> {
        if classes.iter().any(CurveClass::is_trivial) {
            return Err(SkeinError::TrivialComponent);
        }
        check_laminar(&classes)?;
        classes.sort();
        Ok(Self { classes })
    }

    /// The multicurve whose components are the band-below loops around the
    /// given hole sets.
    pub fn from_sets(sets: &[Vec<usize>]) -> Result<Self, SkeinError> {
        if sets.iter().any(|s| s.is_empty() || s.contains(&0)) {
            return Err(SkeinError::BadClass("hole sets must be nonempty subsets of 1..n".into()));
        }
        Self::new(sets.iter().map(|s| CurveClass::band_below(s)).collect())
    }

    pub fn classes(&self) -> &[CurveClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn max_hole(&self) -> usize {
        self.classes.iter().flat_map(|c| c.enclosed()).max().unwrap_or(0)
    }

    /// Disjoint union of two multicurves.
    pub fn union(&self, other: &Multicurve) -> Result<Self, SkeinError> {
        let mut v = self.classes.clone();
        v.extend(other.classes.iter().cloned());
        Self::new(v)
    }

    /// Parse `{}` or `{1|1,3|2[2]}`.
    pub fn parse(s: &str) -> Result<Self, SkeinError> {
        let bad = || SkeinError::BadClass(s.to_string());
        let inner = s.trim().strip_prefix('{').and_then(|r| r.strip_suffix('}')).ok_or_else(bad)?;
        if inner.trim().is_empty() {
            return Ok(Self::empty());
        }
        let classes = inner.split('|').map(|p| parse_class(p).ok_or_else(bad)).collect::<Result<Vec<_>, _>>()?;
        Self::new(classes)
    }
}

impl PartialOrd for Multicurve {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Fewer components first, then componentwise.
impl Ord for Multicurve {
    fn cmp(&self, other: &Self) -> Ordering {
        self.classes.len().cmp(&other.classes.len()).then_with(|| self.classes.cmp(&other.classes))
    }
}

impl fmt::Display for Multicurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.classes.iter().map(|c| c.to_string()).collect();
        write!(f, "{{{}}}", parts.join("|"))
    }
}

impl fmt::Debug for Multicurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite combination of multicurves on an `n`-holed disk.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SkeinElement {
    n: usize,
    terms: BTreeMap<Multicurve, LaurentScalar>,
}

impl SkeinElement {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn unit(n: usize) -> Self {
        Self::basis(n, Multicurve::empty())
    }

    pub fn basis(n: usize, m: Multicurve) -> Self {
        let mut e = Self::zero(n);
        e.add_term(m, LaurentScalar::one());
        e
    }

    pub fn holes(&self) -> usize {
        self.n
    }

    pub fn add_term(&mut self, m: Multicurve, c: LaurentScalar) {
        if c.is_zero() {
            return;
        }
        let mut v = self.terms.remove(&m).unwrap_or_else(LaurentScalar::zero);
        v += &c;
        if !v.is_zero() {
            self.terms.insert(m, v);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Multicurve, &LaurentScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Multicurve) -> LaurentScalar {
        self.terms.get(m).cloned().unwrap_or_else(LaurentScalar::zero)
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

    pub fn scale(&self, c: &LaurentScalar) -> Self {
        let mut out = Self::zero(self.n);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.add_term(m.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&LaurentScalar::from(-1)))
    }

    /// The first multicurve (in canonical order) where the coefficients differ.
    pub fn first_difference(&self, other: &Self) -> Option<(Multicurve, LaurentScalar, LaurentScalar)> {
        let d = self.sub(other);
        let (m, _) = d.terms.iter().next()?;
        Some((m.clone(), self.coeff(m), other.coeff(m)))
    }
}

impl fmt::Display for SkeinElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return writeln!(f, "0");
        }
        for (m, c) in &self.terms {
            if c.len() > 1 {
                writeln!(f, "({c}) * {m}")?;
            } else {
                writeln!(f, "{c} * {m}")?;
            }
        }
        Ok(())
    }
}
