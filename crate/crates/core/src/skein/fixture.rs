use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use crate::ring::LaurentScalar;

use super::algebra::SkeinAlgebra;
use super::diagram::Diagram;
use super::element::{Multicurve, SkeinElement};
use super::resolve::{resolve_capped, DEFAULT_STATE_CAP};
use super::SkeinError;

/// Outcome of comparing two resolved sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub lhs: SkeinElement,
    pub rhs: SkeinElement,
    /// First multicurve whose coefficients differ, with both coefficients.
    pub discrepancy: Option<(Multicurve, LaurentScalar, LaurentScalar)>,
}

impl IdentityReport {
    pub fn compare(lhs: SkeinElement, rhs: SkeinElement) -> Self {
        let discrepancy = lhs.first_difference(&rhs);
        Self { lhs, rhs, discrepancy }
    }

    pub fn passed(&self) -> bool {
        self.discrepancy.is_none()
    }

    pub fn detail(&self) -> String {
        match &self.discrepancy {
            None => "sides agree".into(),
            Some((m, a, b)) => format!("coefficient of {m}: lhs {a}, rhs {b}"),
        }
    }
}

fn side_sum(terms: &[(LaurentScalar, Diagram)], cap: usize) -> Result<SkeinElement, SkeinError> {
    let n = terms.first().map(|(_, d)| d.board.n).unwrap_or(0);
    let mut out = SkeinElement::zero(n);
    for (c, d) in terms {
        if d.board.n != n {
            return Err(SkeinError::BoardMismatch { expected: n, found: d.board.n });
        }
        out = out.add(&resolve_capped(d, cap)?.scale(c));
    }
    Ok(out)
}

/// Resolve both sides of a linear skein identity and compare.
pub fn verify_skein_identity(
    lhs: &[(LaurentScalar, Diagram)],
    rhs: &[(LaurentScalar, Diagram)],
) -> Result<IdentityReport, SkeinError> {
    let l = side_sum(lhs, DEFAULT_STATE_CAP)?;
    let r = side_sum(rhs, DEFAULT_STATE_CAP)?;
    if !lhs.is_empty() && !rhs.is_empty() && l.holes() != r.holes() {
        return Err(SkeinError::BoardMismatch { expected: l.holes(), found: r.holes() });
    }
    let n = if lhs.is_empty() { r.holes() } else { l.holes() };
    let fix = |e: SkeinElement| if e.is_zero() { SkeinElement::zero(n) } else { e };
    Ok(IdentityReport::compare(fix(l), fix(r)))
}

/// One term of a fixture side: a coefficient times an ordered product of slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureTerm {
    pub coeff: LaurentScalar,
    pub slots: Vec<String>,
}

/// A parsed `identity.txt`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentitySpec {
    pub name: String,
    pub relation: String,
    pub holes: usize,
    pub lhs: Vec<FixtureTerm>,
    pub rhs: Vec<FixtureTerm>,
}

impl IdentitySpec {
    pub fn slots(&self) -> Vec<String> {
        let mut v: Vec<String> = self.lhs.iter().chain(&self.rhs).flat_map(|t| t.slots.iter().cloned()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn parse(name: &str, text: &str) -> Result<Self, SkeinError> {
        let mut spec = Self { name: name.into(), relation: String::new(), holes: 0, lhs: vec![], rhs: vec![] };
        let mut have_board = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |msg: String| SkeinError::Parse { line: idx + 1, msg };
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            match key {
                "relation" => spec.relation = rest.trim().to_string(),
                "board" => {
                    let n = rest.trim().strip_prefix("holes=").ok_or_else(|| perr("expected `board holes=<n>`".into()))?;
                    spec.holes = n.trim().parse().map_err(|_| perr(format!("bad hole count `{n}`")))?;
                    have_board = true;
                }
                "lhs" | "rhs" => {
                    let (c, slots) =
                        rest.split_once(':').ok_or_else(|| perr("expected `<side> <coeff> : <slot>...`".into()))?;
                    let coeff: LaurentScalar = c.parse().map_err(|e| perr(format!("{e}")))?;
                    let slots: Vec<String> = slots.split_whitespace().map(String::from).collect();
                    if let Some(bad) = slots.iter().find(|s| !s.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_')) {
                        return Err(perr(format!("bad slot name `{bad}`")));
                    }
                    let t = FixtureTerm { coeff, slots };
                    if key == "lhs" {
                        spec.lhs.push(t);
                    } else {
                        spec.rhs.push(t);
                    }
                }
                _ => return Err(perr(format!("unrecognized line `{line}`"))),
            }
        }
        if !have_board {
            return Err(SkeinError::Parse { line: 0, msg: "missing `board holes=<n>` line".into() });
        }
        Ok(spec)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        if !self.relation.is_empty() {
            s += &format!("relation {}\n", self.relation);
        }
        s += &format!("board holes={}\n", self.holes);
        for (side, terms) in [("lhs", &self.lhs), ("rhs", &self.rhs)] {
            for t in terms {
                s += &format!("{side} {} : {}\n", t.coeff, t.slots.join(" "));
            }
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixtureStatus {
    Pass,
    Fail(String),
    /// Some slot still awaits a transcription.
    Skipped(String),
}

impl FixtureStatus {
    pub fn label(&self) -> &'static str {
        match self {
            FixtureStatus::Pass => "PASS",
            FixtureStatus::Fail(_) => "FAIL",
            FixtureStatus::Skipped(_) => "SKIPPED",
        }
    }
}

impl fmt::Display for FixtureStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixtureStatus::Pass => write!(f, "PASS"),
            FixtureStatus::Fail(m) => write!(f, "FAIL ({m})"),
            FixtureStatus::Skipped(m) => write!(f, "SKIPPED-needs-transcription ({m})"),
        }
    }
}

pub const IDENTITY_FILE: &str = "identity.txt";

pub fn slot_path(dir: &Path, slot: &str) -> PathBuf {
    dir.join(format!("{slot}.dia"))
}

fn is_untranscribed(text: &str) -> bool {
    text.lines().any(|l| l.split('#').next().unwrap_or("").trim() == "untranscribed")
}

fn term_value(alg: &SkeinAlgebra, dir: &Path, t: &FixtureTerm) -> Result<SkeinElement, String> {
    let mut acc = SkeinElement::unit(alg.board().n);
    for slot in &t.slots {
        let path = slot_path(dir, slot);
        let text = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        let d = Diagram::parse(&text).map_err(|e| format!("{slot}.dia: {e}"))?;
        let v = alg.resolve(&d).map_err(|e| format!("{slot}.dia: {e}"))?;
        acc = alg.multiply(&acc, &v).map_err(|e| format!("{slot}: {e}"))?;
    }
    Ok(acc.scale(&t.coeff))
}

/// Verify one fixture directory.
pub fn verify_fixture(dir: &Path, state_cap: usize) -> FixtureStatus {
    let name = dir.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let text = match fs::read_to_string(dir.join(IDENTITY_FILE)) {
        Ok(t) => t,
        Err(e) => return FixtureStatus::Fail(format!("{IDENTITY_FILE}: {e}")),
    };
    let spec = match IdentitySpec::parse(&name, &text) {
        Ok(s) => s,
        Err(e) => return FixtureStatus::Fail(format!("{IDENTITY_FILE}: {e}")),
    };
    let mut pending = Vec::new();
    for slot in spec.slots() {
        match fs::read_to_string(slot_path(dir, &slot)) {
            Ok(t) if is_untranscribed(&t) => pending.push(slot),
            Ok(_) => {}
            Err(e) => return FixtureStatus::Fail(format!("{slot}.dia: {e}")),
        }
    }
    if !pending.is_empty() {
        return FixtureStatus::Skipped(format!("slots {}", pending.join(", ")));
    }
    let alg = SkeinAlgebra::with_cap(spec.holes, state_cap);
    let side = |terms: &[FixtureTerm]| -> Result<SkeinElement, String> {
        let mut s = SkeinElement::zero(spec.holes);
        for t in terms {
            s = s.add(&term_value(&alg, dir, t)?);
        }
        Ok(s)
    };
    match (side(&spec.lhs), side(&spec.rhs)) {
        (Ok(l), Ok(r)) => {
            let rep = IdentityReport::compare(l, r);
            if rep.passed() {
                FixtureStatus::Pass
            } else {
                FixtureStatus::Fail(rep.detail())
            }
        }
        (Err(e), _) | (_, Err(e)) => FixtureStatus::Fail(e),
    }
}

/// Verify every fixture under `root` (each subdirectory holding an
/// `identity.txt`), in name order.
pub fn verify_fixture_dir(root: &Path, state_cap: usize) -> Result<Vec<(String, FixtureStatus)>, SkeinError> {
    let entries = fs::read_dir(root).map_err(|e| SkeinError::Io(format!("{}: {e}", root.display())))?;
    let mut dirs: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir() && p.join(IDENTITY_FILE).exists())
        .collect();
    dirs.sort();
    Ok(dirs
        .iter()
        .map(|d| (d.file_name().unwrap_or_default().to_string_lossy().into_owned(), verify_fixture(d, state_cap)))
        .collect())
}

/// Coefficient shorthand for templates: `*`-separated factors from `q`, `qb`
/// (q inverse), `q2`, `a` (alpha), `1`, with an optional leading `-`.
fn shorthand(s: &str) -> LaurentScalar {
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let mut c = LaurentScalar::one();
    for f in body.split('*') {
        let v = match f {
            "q" => LaurentScalar::q(),
            "qb" => LaurentScalar::qbar(),
            "q2" => LaurentScalar::q_pow(2),
            "a" => LaurentScalar::alpha(),
            "qmqb" => LaurentScalar::q() - LaurentScalar::qbar(),
            "1" => LaurentScalar::one(),
            other => unreachable!("unknown template coefficient `{other}`"),
        };
        c = c * v;
    }
    if neg {
        -c
    } else {
        c
    }
}

/// Templates for the identities among collar and handlebody curves.
/// Each entry: name, relation, lhs terms, rhs terms; a term is
/// `coefficient-shorthand slot slot ...`.
const TEMPLATES: &[(&str, &str, &[&str], &[&str])] = &[
    (
        "x1t1",
        "x1 t1 = q lp1 + qbar l1 + t2 r1 + t4 r2",
        &["1 x1t1"],
        &["q lp1", "qb l1", "1 t2r1", "1 t4r2"],
    ),
    ("t1x1_commutator", "t1 x1 - x1 t1 = (q - qbar)(l1 - lp1)", &["1 t1 x1", "-1 x1 t1"], &["qmqb l1", "-qmqb lp1"]),
    (
        "y_prime_minus_y_1",
        "y' - y = qbar(t3 l1 + t1 l3 - t4 l2 - t2 l4) + x2 t2 t4 - x1 t1 t3",
        &["1 yp", "-1 y"],
        &["qb t3 l1", "qb t1 l3", "-qb t4 l2", "-qb t2 l4", "1 x2 t2 t4", "-1 x1 t1 t3"],
    ),
    (
        "y_prime_minus_y_2",
        "y' - y = qbar(tt4 u2 + tt2 u4 - tt3 u1 - tt1 u3) + x1 tt1 tt3 - x2 tt2 tt4",
        &["1 yp", "-1 y"],
        &["qb tt4 u2", "qb tt2 u4", "-qb tt3 u1", "-qb tt1 u3", "1 x1 tt1 tt3", "-1 x2 tt2 tt4"],
    ),
    (
        "x1s3",
        "x1 s3 = q ag12 + qbar ag34 + tt2 t4 + t2 tt4",
        &["1 x1 s3"],
        &["q ag12", "qb ag34", "1 tt2 t4", "1 t2 tt4"],
    ),
    (
        "x2s3",
        "x2 s3 = q ag41 + qbar ag23 + tt1 t3 + t1 tt3",
        &["1 x2 s3"],
        &["q ag41", "qb ag23", "1 tt1 t3", "1 t1 tt3"],
    ),
    (
        "u1s3",
        "u1 s3 = q^2 ag12 tt1 - q^2 ag1 tt2 - q^2 ag2 tt4 - x1 t1 + t2 r1 + t4 r2 - q tt4 tt2 t1 + alpha l1",
        &["1 u1 s3"],
        &["q2 ag12 tt1", "-q2 ag1 tt2", "-q2 ag2 tt4", "-1 x1 t1", "1 t2 r1", "1 t4 r2", "-q tt4 tt2 t1", "a l1"],
    ),
    (
        "l1s3",
        "l1 s3 = q^2 ag12 t1 - q^2 ag2 t4 - q^2 ag1 t2 - x1 tt1 + tt4 r2 + tt2 r1 - q t4 t2 tt1 + alpha u1",
        &["1 l1 s3"],
        &["q2 ag12 t1", "-q2 ag2 t4", "-q2 ag1 t2", "-1 x1 tt1", "1 tt4 r2", "1 tt2 r1", "-q t4 t2 tt1", "a u1"],
    ),
    (
        "u3s3",
        "u3 s3 = ag34 tt3 - ag3 tt4 - q^2 ag4 tt2 - q^2 x1 t3 + q^2 t4 r3 + t2 r4 - q tt2 tt4 t3 + alpha l3",
        &["1 u3 s3"],
        &["1 ag34 tt3", "-1 ag3 tt4", "-q2 ag4 tt2", "-q2 x1 t3", "q2 t4 r3", "1 t2 r4", "-q tt2 tt4 t3", "a l3"],
    ),
    (
        "l3s3",
        "l3 s3 = ag34 t3 - q^2 ag4 t2 - ag3 t4 - q^2 x1 tt3 + tt2 r4 + q^2 tt4 r3 - q t2 t4 tt3 + alpha u3",
        &["1 l3 s3"],
        &["1 ag34 t3", "-q2 ag4 t2", "-1 ag3 t4", "-q2 x1 tt3", "1 tt2 r4", "q2 tt4 r3", "-q t2 t4 tt3", "a u3"],
    ),
    (
        "u2s3",
        "u2 s3 = ag23 tt2 - q^2 ag2 tt3 - ag3 tt1 - q^2 x2 t2 + t3 r2 + q^2 t1 r3 - q tt1 tt3 t2 + alpha l2",
        &["1 u2 s3"],
        &["1 ag23 tt2", "-q2 ag2 tt3", "-1 ag3 tt1", "-q2 x2 t2", "1 t3 r2", "q2 t1 r3", "-q tt1 tt3 t2", "a l2"],
    ),
    (
        "l2s3",
        "l2 s3 = ag23 t2 - ag3 t1 - q^2 ag2 t3 - q^2 x2 tt2 + q^2 tt1 r3 + tt3 r2 - q t1 t3 tt2 + alpha u2",
        &["1 l2 s3"],
        &["1 ag23 t2", "-1 ag3 t1", "-q2 ag2 t3", "-q2 x2 tt2", "q2 tt1 r3", "1 tt3 r2", "-q t1 t3 tt2", "a u2"],
    ),
    (
        "u4s3",
        "u4 s3 = q^2 ag41 tt4 - q^2 ag4 tt1 - q^2 ag1 tt3 - x2 t4 + t1 r4 + t3 r1 - q tt1 tt3 t4 + alpha l4",
        &["1 u4 s3"],
        &["q2 ag41 tt4", "-q2 ag4 tt1", "-q2 ag1 tt3", "-1 x2 t4", "1 t1 r4", "1 t3 r1", "-q tt1 tt3 t4", "a l4"],
    ),
    (
        "l4s3",
        "l4 s3 = q^2 ag41 t4 - q^2 ag1 t3 - q^2 ag4 t1 - x2 tt4 + tt3 r1 + tt1 r4 - q t1 t3 tt4 + alpha u4",
        &["1 l4 s3"],
        &["q2 ag41 t4", "-q2 ag1 t3", "-q2 ag4 t1", "-1 x2 tt4", "1 tt3 r1", "1 tt1 r4", "-q t1 t3 tt4", "a u4"],
    ),
    (
        "alpha_identity",
        "alpha(q x1 (t1 - tt1)(t3 - tt3) - q x2 (t2 - tt2)(t4 - tt4) + (u1 - l1)(t3 - tt3) \
         + (u3 - l3)(t1 - tt1) - (u2 - l2)(t4 - tt4) - (u4 - l4)(t2 - tt2)) = 0",
        &[
            "q*a x1 t1 t3", "-q*a x1 t1 tt3", "-q*a x1 tt1 t3", "q*a x1 tt1 tt3",
            "-q*a x2 t2 t4", "q*a x2 t2 tt4", "q*a x2 tt2 t4", "-q*a x2 tt2 tt4",
            "a u1 t3", "-a u1 tt3", "-a l1 t3", "a l1 tt3",
            "a u3 t1", "-a u3 tt1", "-a l3 t1", "a l3 tt1",
            "-a u2 t4", "a u2 tt4", "a l2 t4", "-a l2 tt4",
            "-a u4 t2", "a u4 tt2", "a l4 t2", "-a l4 tt2",
        ],
        &[],
    ),
];

fn template_specs() -> Vec<IdentitySpec> {
    let terms = |v: &[&str]| -> Vec<FixtureTerm> {
        v.iter()
            .map(|t| {
                let mut it = t.split_whitespace();
                let coeff = shorthand(it.next().unwrap_or("1"));
                FixtureTerm { coeff, slots: it.map(String::from).collect() }
            })
            .collect()
    };
    TEMPLATES
        .iter()
        .map(|(name, rel, l, r)| IdentitySpec {
            name: name.to_string(),
            relation: rel.to_string(),
            holes: 5,
            lhs: terms(l),
            rhs: terms(r),
        })
        .collect()
}

/// Names of the identities that have templates.
pub fn template_names() -> Vec<String> {
    TEMPLATES.iter().map(|t| t.0.to_string()).collect()
}

/// The identity description of a template, if one exists under that name.
pub fn template(name: &str) -> Option<IdentitySpec> {
    template_specs().into_iter().find(|s| s.name == name)
}

/// Write template fixture directories under `root`. Existing identity
/// directories are kept unless `force` is set. Returns each identity name
/// with whether it was written.
pub fn emit_fixture_templates(root: &Path, force: bool) -> Result<Vec<(String, bool)>, SkeinError> {
    let io = |p: &Path, e: std::io::Error| SkeinError::Io(format!("{}: {e}", p.display()));
    let mut out = Vec::new();
    for spec in template_specs() {
        let dir = root.join(&spec.name);
        if dir.join(IDENTITY_FILE).exists() && !force {
            out.push((spec.name.clone(), false));
            continue;
        }
        fs::create_dir_all(&dir).map_err(|e| io(&dir, e))?;
        let ipath = dir.join(IDENTITY_FILE);
        fs::write(&ipath, spec.render()).map_err(|e| io(&ipath, e))?;
        for slot in spec.slots() {
            let p = slot_path(&dir, &slot);
            let body = format!(
                "# slot `{slot}` of {}: draw the curve(s) on the board below, then delete the marker line\n\
                 board holes={}\nuntranscribed\n",
                spec.name, spec.holes
            );
            fs::write(&p, body).map_err(|e| io(&p, e))?;
        }
        out.push((spec.name.clone(), true));
    }
    Ok(out)
}
