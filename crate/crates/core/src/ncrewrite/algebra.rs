use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::ring::{CPoly, LaurentScalar};

use super::NcError;

type L = LaurentScalar;

/// A word in the generators, compared by length first and then
/// lexicographically by generator index.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

/// Which redex to rewrite first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

/// Ordered generators plus rewrite rules `g_j g_i -> sum c * w` for `j > i`,
/// every right-hand word strictly smaller than the left-hand side.
#[derive(Clone, Debug)]
pub struct NcAlgebraSpec {
    names: Vec<String>,
    rules: HashMap<(u8, u8), Vec<(L, Word)>>,
    central: Vec<bool>,
}

impl NcAlgebraSpec {
    pub fn new(names: &[&str]) -> Self {
        assert!(names.len() < u8::MAX as usize);
        Self {
            names: names.iter().map(|s| s.to_string()).collect(),
            rules: HashMap::new(),
            central: vec![false; names.len()],
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Result<u8, NcError> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| i as u8)
            .ok_or_else(|| NcError::UnknownGenerator(name.to_string()))
    }

    pub fn word(&self, letters: &[&str]) -> Result<Word, NcError> {
        letters.iter().map(|l| self.index(l)).collect::<Result<Vec<_>, _>>().map(Word)
    }

    /// Add the rule `hi lo -> rhs`; `hi` must come after `lo` in the order and
    /// every word of `rhs` must be smaller than `hi lo`.
    pub fn add_rule(&mut self, hi: &str, lo: &str, rhs: &[(L, &[&str])]) -> Result<(), NcError> {
        let (j, i) = (self.index(hi)?, self.index(lo)?);
        if j <= i {
            return Err(NcError::RuleNotDecreasing(format!("{hi} {lo}")));
        }
        let lhs = Word(vec![j, i]);
        let mut out = Vec::new();
        for (c, w) in rhs {
            let w = self.word(w)?;
            if w >= lhs {
                return Err(NcError::RuleNotDecreasing(format!("{hi} {lo} -> {}", self.render_word(&w))));
            }
            if !c.is_zero() {
                out.push((c.clone(), w));
            }
        }
        self.rules.insert((j, i), out);
        Ok(())
    }

    /// Declare `name` central: it commutes with every other generator. The
    /// commutation rules move the larger letter of each pair to the right.
    pub fn declare_central(&mut self, name: &str) -> Result<(), NcError> {
        let g = self.index(name)?;
        self.central[g as usize] = true;
        for h in 0..self.names.len() as u8 {
            if h == g {
                continue;
            }
            let (hi, lo) = if h > g { (h, g) } else { (g, h) };
            self.rules.insert((hi, lo), vec![(L::one(), Word(vec![lo, hi]))]);
        }
        Ok(())
    }

    pub fn is_central(&self, name: &str) -> bool {
        self.index(name).map(|g| self.central[g as usize]).unwrap_or(false)
    }

    /// Every rule's right-hand side is strictly below its left-hand side.
    pub fn termination_certificate(&self) -> bool {
        self.rules.iter().all(|(&(j, i), rhs)| {
            let lhs = Word(vec![j, i]);
            j > i && rhs.iter().all(|(_, w)| *w < lhs)
        })
    }

    fn redex(&self, w: &Word, strategy: Strategy) -> Option<usize> {
        let n = w.0.len();
        if n < 2 {
            return None;
        }
        let hit = |k: &usize| self.rules.contains_key(&(w.0[*k], w.0[*k + 1]));
        match strategy {
            Strategy::Leftmost => (0..n - 1).find(hit),
            Strategy::Rightmost => (0..n - 1).rev().find(hit),
        }
    }

    pub fn is_normal(&self, w: &Word) -> bool {
        self.redex(w, Strategy::Leftmost).is_none()
    }

    /// Rewrite to the fixed point. Pending words are processed largest
    /// first, so every word is expanded at most once.
    pub fn normalize_terms<I>(&self, terms: I, strategy: Strategy) -> BTreeMap<Word, L>
    where
        I: IntoIterator<Item = (Word, L)>,
    {
        let mut pending: BTreeMap<Word, L> = BTreeMap::new();
        for (w, c) in terms {
            add_into(&mut pending, w, c);
        }
        let mut done: BTreeMap<Word, L> = BTreeMap::new();
        while let Some((w, c)) = pending.pop_last() {
            match self.redex(&w, strategy) {
                None => add_into(&mut done, w, c),
                Some(k) => {
                    let rhs = &self.rules[&(w.0[k], w.0[k + 1])];
                    for (rc, rw) in rhs {
                        let mut nw = Vec::with_capacity(w.0.len() + rw.0.len());
                        nw.extend_from_slice(&w.0[..k]);
                        nw.extend_from_slice(&rw.0);
                        nw.extend_from_slice(&w.0[k + 2..]);
                        add_into(&mut pending, Word(nw), &c * rc);
                    }
                }
            }
        }
        done
    }

    pub fn render_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.0.iter().map(|&g| self.names[g as usize].as_str()).collect::<Vec<_>>().join("*")
    }
}

fn add_into(map: &mut BTreeMap<Word, L>, w: Word, c: L) {
    if c.is_zero() {
        return;
    }
    match map.get_mut(&w) {
        Some(slot) => {
            *slot += &c;
            if slot.is_zero() {
                map.remove(&w);
            }
        }
        None => {
            map.insert(w, c);
        }
    }
}

/// A normal-form element of the algebra described by `spec`.
#[derive(Clone)]
pub struct NcElement {
    spec: Arc<NcAlgebraSpec>,
    terms: BTreeMap<Word, L>,
}

impl NcElement {
    pub fn zero(spec: &Arc<NcAlgebraSpec>) -> Self {
        Self { spec: spec.clone(), terms: BTreeMap::new() }
    }

    pub fn scalar(spec: &Arc<NcAlgebraSpec>, c: L) -> Self {
        Self::normalize(spec, [(Word::empty(), c)])
    }

    pub fn one(spec: &Arc<NcAlgebraSpec>) -> Self {
        Self::scalar(spec, L::one())
    }

    pub fn gen(spec: &Arc<NcAlgebraSpec>, name: &str) -> Result<Self, NcError> {
        Ok(Self::normalize(spec, [(spec.word(&[name])?, L::one())]))
    }

    pub fn normalize<I>(spec: &Arc<NcAlgebraSpec>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Word, L)>,
    {
        Self::normalize_with(spec, terms, Strategy::Leftmost)
    }

    pub fn normalize_with<I>(spec: &Arc<NcAlgebraSpec>, terms: I, strategy: Strategy) -> Self
    where
        I: IntoIterator<Item = (Word, L)>,
    {
        Self { spec: spec.clone(), terms: spec.normalize_terms(terms, strategy) }
    }

    /// `sum_m c_m * (g_1^{e_1} ... g_k^{e_k})` for a commutative polynomial
    /// whose variables are matched by name to generators.
    pub fn from_cpoly(spec: &Arc<NcAlgebraSpec>, p: &CPoly) -> Result<Self, NcError> {
        let gens: Vec<u8> = p.vars().iter().map(|v| spec.index(v)).collect::<Result<_, _>>()?;
        let terms = p.terms().map(|(m, c)| {
            let mut w = Vec::new();
            for (g, e) in gens.iter().zip(m.exps()) {
                w.extend(std::iter::repeat_n(*g, *e as usize));
            }
            (Word(w), c.clone())
        });
        Ok(Self::normalize(spec, terms))
    }

    pub fn spec(&self) -> &Arc<NcAlgebraSpec> {
        &self.spec
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &L)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> L {
        self.terms.get(w).cloned().unwrap_or_default()
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

    pub fn scale(&self, c: &L) -> Self {
        let mut out = Self::zero(&self.spec);
        for (w, x) in &self.terms {
            add_into(&mut out.terms, w.clone(), x * c);
        }
        out
    }

    /// Coefficientwise exact division by a scalar.
    pub fn div_scalar_exact(&self, c: &L) -> Option<Self> {
        let mut out = Self::zero(&self.spec);
        for (w, x) in &self.terms {
            out.terms.insert(w.clone(), x.div_exact(c)?);
        }
        Some(out)
    }

    /// Apply the letter substitution `g -> image(g)` (an element of `target`)
    /// to every word and normalize in `target`.
    pub fn substitute(
        &self,
        target: &Arc<NcAlgebraSpec>,
        image: &dyn Fn(&str) -> Result<NcElement, NcError>,
    ) -> Result<NcElement, NcError> {
        let mut images = HashMap::new();
        for (g, name) in self.spec.names.iter().enumerate() {
            images.insert(g as u8, image(name)?);
        }
        let mut acc = NcElement::zero(target);
        for (w, c) in &self.terms {
            let mut prod = NcElement::scalar(target, c.clone());
            for g in &w.0 {
                prod = &prod * &images[g];
            }
            acc = &acc + &prod;
        }
        Ok(acc)
    }

    /// The first word (in ascending order) whose coefficients differ.
    pub fn first_difference(&self, other: &NcElement) -> Option<(String, L, L)> {
        let diff = self - other;
        diff.terms.keys().next().map(|w| (self.spec.render_word(w), self.coeff(w), other.coeff(w)))
    }
}

impl PartialEq for NcElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl fmt::Debug for NcElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for NcElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{}", self.spec.render_word(w))?;
        }
        Ok(())
    }
}

impl Add<&NcElement> for &NcElement {
    type Output = NcElement;
    fn add(self, rhs: &NcElement) -> NcElement {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            add_into(&mut out.terms, w.clone(), c.clone());
        }
        out
    }
}

impl Sub<&NcElement> for &NcElement {
    type Output = NcElement;
    fn sub(self, rhs: &NcElement) -> NcElement {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            add_into(&mut out.terms, w.clone(), -c);
        }
        out
    }
}

impl Neg for &NcElement {
    type Output = NcElement;
    fn neg(self) -> NcElement {
        self.scale(&-L::one())
    }
}

impl Mul<&NcElement> for &NcElement {
    type Output = NcElement;
    fn mul(self, rhs: &NcElement) -> NcElement {
        let raw = self
            .terms
            .iter()
            .flat_map(|(w1, c1)| rhs.terms.iter().map(move |(w2, c2)| (w1.concat(w2), c1 * c2)));
        NcElement::normalize(&self.spec, raw.collect::<Vec<_>>())
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<NcElement> for NcElement {
            type Output = NcElement;
            fn $m(self, rhs: NcElement) -> NcElement {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&NcElement> for NcElement {
            type Output = NcElement;
            fn $m(self, rhs: &NcElement) -> NcElement {
                (&self).$m(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

/// Generators of the collar algebra, in monomial order.
pub const COLLAR_GENERATORS: [&str; 5] = ["t1", "l1", "c", "cp", "x"];

/// The q-commutation algebra on `t1 < l1 < c < cp < x`:
///
/// ```text
/// x t1 = q^2 t1 x + (q^-1 - q^3) l1 + (1 - q^2) c
/// x l1 = q^-2 l1 x + (q - q^-3) t1 + (1 - q^-2) cp
/// ```
///
/// with `c` and `cp` central.
pub fn collar_algebra() -> Arc<NcAlgebraSpec> {
    let mut spec = NcAlgebraSpec::new(&COLLAR_GENERATORS);
    spec.declare_central("c").expect("generator");
    spec.declare_central("cp").expect("generator");
    spec.add_rule(
        "x",
        "t1",
        &[
            (L::q_pow(2), &["t1", "x"]),
            (L::qbar() - L::q_pow(3), &["l1"]),
            (L::one() - L::q_pow(2), &["c"]),
        ],
    )
    .expect("valid rule");
    spec.add_rule(
        "x",
        "l1",
        &[
            (L::q_pow(-2), &["l1", "x"]),
            (L::q() - L::q_pow(-3), &["t1"]),
            (L::one() - L::q_pow(-2), &["cp"]),
        ],
    )
    .expect("valid rule");
    Arc::new(spec)
}

/// Generators of the exterior algebra used after the handle attachments.
/// `w` stands for the formal left factor `u_3 - l_3`.
pub const EXTERIOR_GENERATORS: [&str; 9] = ["w", "r", "c", "cp", "t1", "l1", "lp1", "t", "x"];

/// Formal algebra for the torsion assembly: `w`, `r`, `c`, `cp` central and
/// otherwise free. With `meridian_rule`, also
/// `x t = q lp1 + q^-1 l1 + r t`.
pub fn exterior_algebra(meridian_rule: bool) -> Arc<NcAlgebraSpec> {
    let mut spec = NcAlgebraSpec::new(&EXTERIOR_GENERATORS);
    for g in ["w", "r", "c", "cp"] {
        spec.declare_central(g).expect("generator");
    }
    // central letters sit at the front of the order, so the commutation rules
    // push them to the left
    for (hi, lo) in [("r", "w"), ("c", "w"), ("cp", "w"), ("c", "r"), ("cp", "r"), ("cp", "c")] {
        spec.add_rule(hi, lo, &[(L::one(), &[lo, hi])]).expect("valid rule");
    }
    for g in ["t1", "l1", "lp1", "t", "x"] {
        for z in ["w", "r", "c", "cp"] {
            spec.add_rule(g, z, &[(L::one(), &[z, g])]).expect("valid rule");
        }
    }
    if meridian_rule {
        spec.add_rule("x", "t", &[(L::q(), &["lp1"]), (L::qbar(), &["l1"]), (L::one(), &["r", "t"])])
            .expect("valid rule");
    }
    Arc::new(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(spec: &Arc<NcAlgebraSpec>, w: &[&str]) -> NcElement {
        NcElement::normalize(spec, [(spec.word(w).unwrap(), L::one())])
    }

    #[test]
    fn x_past_t1() {
        let a = collar_algebra();
        let got = el(&a, &["x", "t1"]);
        let expected = &(&el(&a, &["t1", "x"]).scale(&L::q_pow(2)) + &el(&a, &["l1"]).scale(&(L::qbar() - L::q_pow(3))))
            + &el(&a, &["c"]).scale(&(L::one() - L::q_pow(2)));
        assert_eq!(got, expected);
    }

    #[test]
    fn c_commutes_with_x() {
        let a = collar_algebra();
        assert_eq!(el(&a, &["x", "c"]), el(&a, &["c", "x"]));
        assert_eq!(el(&a, &["x", "cp"]), el(&a, &["cp", "x"]));
    }

    #[test]
    fn two_step_reduction_agrees() {
        let a = collar_algebra();
        let x = el(&a, &["x"]);
        assert_eq!(el(&a, &["x", "x", "t1"]), &x * &el(&a, &["x", "t1"]));
    }

    #[test]
    fn rules_are_order_decreasing() {
        assert!(collar_algebra().termination_certificate());
        assert!(exterior_algebra(true).termination_certificate());
        let mut bad = NcAlgebraSpec::new(&["a", "b"]);
        assert!(bad.add_rule("a", "b", &[]).is_err());
        assert!(bad.add_rule("b", "a", &[(L::one(), &["b", "b"])]).is_err());
    }

    #[test]
    fn central_letters_move_left_in_exterior() {
        let e = exterior_algebra(false);
        assert_eq!(el(&e, &["x", "t", "r"]), el(&e, &["r", "x", "t"]));
        assert_eq!(el(&e, &["t", "w", "x", "r"]), el(&e, &["w", "r", "t", "x"]));
        // no relation between x and t without the meridian rule
        assert_ne!(el(&e, &["x", "t"]), el(&e, &["t", "x"]));
    }
}
