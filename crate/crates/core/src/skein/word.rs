use std::fmt;

/// Free reduction of a word in the free group on the hole generators.
pub fn free_reduce(w: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Free and cyclic reduction.
pub fn cyclic_reduce(w: &[i32]) -> Vec<i32> {
    let mut v = free_reduce(w);
    let mut start = 0;
    let mut end = v.len();
    while end - start >= 2 && v[start] == -v[end - 1] {
        start += 1;
        end -= 1;
    }
    v.truncate(end);
    v.drain(..start);
    v
}

pub fn inverse(w: &[i32]) -> Vec<i32> {
    w.iter().rev().map(|l| -l).collect()
}

fn min_rotation(w: &[i32]) -> Vec<i32> {
    let n = w.len();
    (0..n)
        .map(|k| w[k..].iter().chain(&w[..k]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

/// The free homotopy class of an unoriented closed curve in the holed disk,
/// stored as the lexicographically least cyclic rotation of the reduced word
/// or its inverse. The empty word is the trivial class.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CurveClass {
    word: Vec<i32>,
}

impl CurveClass {
    pub fn from_word(w: &[i32]) -> Self {
        let r = cyclic_reduce(w);
        if r.is_empty() {
            return Self { word: r };
        }
        let a = min_rotation(&r);
        let b = min_rotation(&inverse(&r));
        Self { word: a.min(b) }
    }

    /// The class of a loop around the holes of `set` joined below the other
    /// holes: `g_{i_1} ... g_{i_k}` for `i_1 < ... < i_k`.
    pub fn band_below(set: &[usize]) -> Self {
        let mut s: Vec<i32> = set.iter().map(|&i| i as i32).collect();
        s.sort_unstable();
        s.dedup();
        Self::from_word(&s)
    }

    pub fn word(&self) -> &[i32] {
        &self.word
    }

    pub fn is_trivial(&self) -> bool {
        self.word.is_empty()
    }

    /// Holes with nonzero exponent sum, ascending.
    pub fn enclosed(&self) -> Vec<usize> {
        let max = self.word.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0);
        let mut sum = vec![0i64; max + 1];
        for &l in &self.word {
            sum[l.unsigned_abs() as usize] += l.signum() as i64;
        }
        (1..=max).filter(|&i| sum[i] != 0).collect()
    }

    /// Whether this is the band-below class of its enclosed set.
    pub fn is_band_below(&self) -> bool {
        let e = self.enclosed();
        !e.is_empty() && *self == Self::band_below(&e)
    }
}

impl PartialOrd for CurveClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CurveClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.enclosed()
            .cmp(&other.enclosed())
            .then_with(|| self.word.len().cmp(&other.word.len()))
            .then_with(|| self.word.cmp(&other.word))
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set: Vec<String> = self.enclosed().iter().map(|i| i.to_string()).collect();
        write!(f, "{}", set.join(","))?;
        if !self.is_band_below() {
            let w: Vec<String> = self.word.iter().map(|l| l.to_string()).collect();
            write!(f, "[{}]", w.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parse `1,3` (band-below class) or `1,3[1 2 -3]` (explicit word).
pub fn parse_class(s: &str) -> Option<CurveClass> {
    let s = s.trim();
    if let Some((set, rest)) = s.split_once('[') {
        let word = rest.strip_suffix(']')?;
        let w: Vec<i32> = word.split_whitespace().map(|t| t.parse().ok()).collect::<Option<_>>()?;
        let c = CurveClass::from_word(&w);
        let expected: Vec<usize> = set.split(',').map(|t| t.trim().parse().ok()).collect::<Option<_>>()?;
        (c.enclosed() == expected).then_some(c)
    } else {
        let set: Vec<usize> = s.split(',').map(|t| t.trim().parse().ok()).collect::<Option<_>>()?;
        if set.contains(&0) {
            return None;
        }
        Some(CurveClass::band_below(&set))
    }
}
