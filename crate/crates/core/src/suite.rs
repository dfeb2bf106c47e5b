//! Verification suites, their configuration and the combined report.

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cheby;
use crate::chvar::{self, random_sl2, ScanConfig};
use crate::ncrewrite::{
    commutation_matrix, derive_e_n, e_one_reduced, theta_closed_form, theta_of_matrix, verify_commute_many,
    Mutation, Outcome, Route,
};
use crate::ring::LaurentScalar;
use crate::skein::{
    canonical_diagram, emit_fixture_templates, epsilon_of_element, has_canonical_diagram, resolve, verify_fixture_dir,
    Board, Diagram, FixtureStatus, Multicurve, SkeinAlgebra, SkeinElement, DEFAULT_STATE_CAP,
};

pub const DEFAULT_FIXTURE_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("{0}")]
    Value(String),
    #[error("{0}")]
    Io(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    /// Upper index for the matrix recursion check and the commutation suite; the
    /// Chebyshev identities run to twice this.
    pub max_n: usize,
    pub b_samples: usize,
    pub t_samples: usize,
    pub fixture_dir: PathBuf,
    pub seed: u64,
    pub state_cap: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            max_n: 32,
            b_samples: 100,
            t_samples: 8,
            fixture_dir: PathBuf::from(DEFAULT_FIXTURE_DIR),
            seed: 1,
            state_cap: DEFAULT_STATE_CAP,
        }
    }
}

impl Config {
    /// Parse `key = value` lines over the defaults. `#` starts a comment.
    /// A relative `fixture_dir` is taken relative to `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| ConfigError::Line { line: idx + 1, msg };
            let (key, value) = line.split_once('=').ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |what: &str| -> Result<u64, ConfigError> {
                value.parse::<u64>().map_err(|_| err(format!("{what} must be a non-negative integer, got `{value}`")))
            };
            match key {
                "max_n" => cfg.max_n = num(key)?.max(1) as usize,
                "b_samples" => cfg.b_samples = num(key)? as usize,
                "t_samples" => cfg.t_samples = num(key)? as usize,
                "seed" => cfg.seed = num(key)?,
                "state_cap" => cfg.state_cap = num(key)? as usize,
                "fixture_dir" => {
                    if value.is_empty() {
                        return Err(err("fixture_dir is empty".into()));
                    }
                    cfg.fixture_dir = base.join(value);
                }
                _ => return Err(err(format!("unknown key `{key}`"))),
            }
        }
        if cfg.b_samples < 32 {
            return Err(ConfigError::Value(format!("b_samples = {} is below 32", cfg.b_samples)));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail(String),
    Skipped(String),
}

impl Status {
    fn check(ok: bool, detail: impl FnOnce() -> String) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail(detail())
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail(_) => "FAIL",
            Status::Skipped(_) => "SKIPPED-needs-transcription",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Item {
    pub name: String,
    pub status: Status,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub items: Vec<Item>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn first_failure(&self) -> Option<&Item> {
        self.items.iter().find(|i| matches!(i.status, Status::Fail(_)))
    }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
}

impl VerificationReport {
    pub fn failed(&self) -> bool {
        self.suites.iter().any(|s| s.first_failure().is_some())
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed())
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        let mut c = (0, 0, 0);
        for i in self.suites.iter().flat_map(|s| &s.items) {
            match i.status {
                Status::Pass => c.0 += 1,
                Status::Fail(_) => c.1 += 1,
                Status::Skipped(_) => c.2 += 1,
            }
        }
        c
    }

    /// Wall-clock time per suite; kept out of the report text so that it stays reproducible.
    pub fn timings(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            let _ = writeln!(out, "{}: {:.3}s", s.name, s.elapsed.as_secs_f64());
        }
        out
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed={}", self.seed)?;
        for s in &self.suites {
            writeln!(f, "[{}]", s.name)?;
            for i in &s.items {
                match &i.status {
                    Status::Pass => writeln!(f, "PASS {}", i.name)?,
                    Status::Fail(d) => writeln!(f, "FAIL {}: {d}", i.name)?,
                    Status::Skipped(d) => writeln!(f, "SKIPPED-needs-transcription {} ({d})", i.name)?,
                }
            }
            if let Some(i) = s.first_failure() {
                writeln!(f, "first failure: {}", i.name)?;
            }
        }
        let (p, fl, sk) = self.counts();
        writeln!(f, "total: {p} PASS, {fl} FAIL, {sk} SKIPPED")
    }
}

fn item(name: impl Into<String>, status: Status) -> Item {
    Item { name: name.into(), status }
}

fn timed(name: &'static str, f: impl FnOnce() -> Vec<Item>) -> SuiteReport {
    let start = Instant::now();
    let items = f();
    SuiteReport { name, items, elapsed: start.elapsed() }
}

pub fn cheby_suite(max_n: usize) -> Vec<Item> {
    let rows = cheby::verify_identities(max_n);
    let mut names: Vec<&str> = Vec::new();
    for r in &rows {
        if !names.contains(&r.identity) {
            names.push(r.identity);
        }
    }
    names
        .into_iter()
        .map(|id| {
            let mine: Vec<_> = rows.iter().filter(|r| r.identity == id).collect();
            let (lo, hi) = (mine[0].n, mine[mine.len() - 1].n);
            let bad = mine.iter().find(|r| !r.pass);
            item(
                format!("{id} n={lo}..{hi}"),
                Status::check(bad.is_none(), || {
                    let r = bad.unwrap();
                    format!("n={}: {}", r.n, r.detail.clone().unwrap_or_default())
                }),
            )
        })
        .collect()
}

pub fn matrix_suite(max_n: usize) -> Vec<Item> {
    let a = commutation_matrix();
    let bad = (0..=max_n).find_map(|n| theta_of_matrix(&a, n).first_difference(&theta_closed_form(n)).map(|d| (n, d)));
    vec![item(
        format!("theta_of_matrix=closed_form n=0..{max_n}"),
        Status::check(bad.is_none(), || {
            let (n, (i, j, d)) = bad.clone().unwrap();
            format!("n={n} entry ({i},{j}): {d}")
        }),
    )]
}

fn outcome_status(o: &Outcome) -> Result<(), String> {
    match o {
        Outcome::Pass => Ok(()),
        Outcome::Fail(d) => Err(d.clone()),
    }
}

/// Per-`n` results: (commute_many, mutation detected, e_n).
fn nc_row(n: usize) -> [Result<(), String>; 3] {
    let commute = match verify_commute_many(n, Route::Both, Mutation::None) {
        Ok(r) => r
            .commutative
            .iter()
            .chain(r.rewriting.iter())
            .try_for_each(outcome_status),
        Err(e) => Err(e.to_string()),
    };
    let mutation = match verify_commute_many(n, Route::Both, Mutation::EllCoefficient) {
        Ok(r) => {
            let caught = |o: &Option<Outcome>| matches!(o, Some(Outcome::Fail(_)));
            if caught(&r.commutative) && caught(&r.rewriting) {
                Ok(())
            } else {
                Err("a mutated coefficient was not detected".into())
            }
        }
        Err(e) => Err(e.to_string()),
    };
    let e_n = match derive_e_n(n) {
        Ok(r) => outcome_status(&r.outcome),
        Err(e) => Err(e.to_string()),
    };
    [commute, mutation, e_n]
}

/// The commutation identity by both routes, its mutation check and the
/// torsion derivation, for each `1 <= n <= max_n`, in parallel over `n`.
pub fn ncrewrite_rows(max_n: usize) -> Vec<(usize, [Result<(), String>; 3])> {
    let threads = std::thread::available_parallelism().map(|k| k.get()).unwrap_or(4).min(max_n.max(1));
    let mut rows: Vec<(usize, [Result<(), String>; 3])> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                scope.spawn(move || {
                    (1..=max_n).filter(|n| n % threads == t).map(|n| (n, nc_row(n))).collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("ncrewrite worker panicked")).collect()
    });
    rows.sort_by_key(|r| r.0);
    rows
}

pub fn ncrewrite_suite(max_n: usize) -> Vec<Item> {
    let rows = ncrewrite_rows(max_n);
    let names = ["commute_many (both routes)", "commute_many mutation detected", "e_n derivation"];
    let mut items: Vec<Item> = names
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let bad = rows.iter().find_map(|(n, r)| r[k].clone().err().map(|d| format!("n={n}: {d}")));
            item(format!("{name} n=1..{max_n}"), Status::check(bad.is_none(), || bad.clone().unwrap()))
        })
        .collect();
    let e1 = match e_one_reduced() {
        Ok((a, b)) => Status::check(a == b, || "e^(1) does not reduce to q alpha e".into()),
        Err(e) => Status::Fail(e.to_string()),
    };
    items.push(item("e^(1) = q alpha e", e1));
    items
}

fn random_canonical(rng: &mut ChaCha8Rng, n: usize, max_components: usize) -> Multicurve {
    loop {
        let k = rng.random_range(0..=max_components);
        let fam: Vec<Vec<usize>> = (0..k)
            .map(|_| {
                let s: Vec<usize> = (1..=n).filter(|_| rng.random_bool(0.5)).collect();
                if s.is_empty() {
                    vec![rng.random_range(1..=n)]
                } else {
                    s
                }
            })
            .collect();
        if let Ok(m) = Multicurve::from_sets(&fam) {
            if has_canonical_diagram(&m) {
                return m;
            }
        }
    }
}

fn skein_local_relations() -> Status {
    let run = || -> Result<Option<String>, String> {
        let loop_d = Diagram::parse("board holes=0\ncurve a : (0,0) (1,0) (1,1) (0,1)\n").map_err(|e| e.to_string())?;
        let got = resolve(&loop_d).map_err(|e| e.to_string())?;
        if got != SkeinElement::unit(0).scale(&-LaurentScalar::alpha()) {
            return Ok(Some(format!("trivial loop gave {got}")));
        }
        let curl = Diagram::parse(
            "board holes=0\ncurve a : (0,0) (2,1) (1,2) (1,-1) (3,0) (3,3) (0,3)\nover : a-\n",
        )
        .map_err(|e| e.to_string())?;
        let w = curl.writhe();
        let got = resolve(&curl).map_err(|e| e.to_string())?;
        let want = SkeinElement::unit(0).scale(&(LaurentScalar::alpha() * LaurentScalar::h_pow(3 * w)));
        if got != want {
            return Ok(Some(format!("curl with writhe {w} gave {got}")));
        }
        let r2 = Diagram::parse(
            "board holes=1\ncurve a : (1/2,-1/2) (3/2,-1/2) (3/2,1/2) (1/2,1/2)\n\
             curve b : (5/8,-5/8) (7/4,-5/8) (7/4,5/8) (5/8,5/8)\nover : a a\n",
        )
        .map_err(|e| e.to_string())?;
        let got = resolve(&r2).map_err(|e| e.to_string())?;
        let want = SkeinElement::basis(1, Multicurve::from_sets(&[vec![1], vec![1]]).map_err(|e| e.to_string())?);
        if got != want {
            return Ok(Some(format!("two parallel loops crossed twice gave {got}")));
        }
        Ok(None)
    };
    match run() {
        Ok(None) => Status::Pass,
        Ok(Some(d)) | Err(d) => Status::Fail(d),
    }
}

/// Products of powers of the single generator on a 1-hole board.
pub fn annulus_check(max_power: usize) -> Result<(), String> {
    let alg = SkeinAlgebra::new(1);
    let power = |k: usize| Multicurve::from_sets(&vec![vec![1]; k]).map_err(|e| e.to_string());
    for i in 0..=max_power {
        for j in 0..=max_power {
            let da = canonical_diagram(&power(i)?, Board::new(1)).map_err(|e| e.to_string())?;
            let db = canonical_diagram(&power(j)?, Board::new(1)).map_err(|e| e.to_string())?;
            let c = alg.stack(&da, &db).map_err(|e| e.to_string())?.crossing_count();
            if c != 0 {
                return Err(format!("stacked powers {i},{j} have {c} crossings"));
            }
            let p = alg.multiply_basis(&power(i)?, &power(j)?).map_err(|e| e.to_string())?;
            if p != alg.basis(power(i + j)?) {
                return Err(format!("t^{i} t^{j} = {p}"));
            }
        }
    }
    Ok(())
}

fn random_element(rng: &mut ChaCha8Rng, n: usize) -> SkeinElement {
    let mut e = SkeinElement::zero(n);
    for _ in 0..2 {
        let c = LaurentScalar::from_terms((0..2).map(|_| (rng.random_range(-3..=3i64), rng.random_range(-3..=3i64))));
        e.add_term(random_canonical(rng, n, 2), c);
    }
    e
}

/// Largest relative `|eps(ab) - eps(a) eps(b)|` over `pairs` random element
/// pairs on a 3-hole board, `reps` random representations each.
pub fn epsilon_multiplicativity(seed: u64, pairs: usize, reps: usize) -> Result<f64, String> {
    let n = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alg = SkeinAlgebra::new(n);
    let mut worst: f64 = 0.0;
    for _ in 0..pairs {
        let a = random_element(&mut rng, n);
        let b = random_element(&mut rng, n);
        let ab = alg.multiply(&a, &b).map_err(|e| e.to_string())?;
        for _ in 0..reps {
            let rho: Vec<_> = (0..n).map(|_| random_sl2(&mut rng)).collect();
            let lhs = epsilon_of_element(&ab, &rho);
            let rhs = epsilon_of_element(&a, &rho) * epsilon_of_element(&b, &rho);
            worst = worst.max((lhs - rhs).norm() / (1.0 + rhs.norm()));
        }
    }
    Ok(worst)
}

pub fn skein_suite(seed: u64) -> Vec<Item> {
    let mut items = vec![item("local relations: loop, curl, R2", skein_local_relations())];
    items.push(item("annulus powers <= 6", match annulus_check(6) {
        Ok(()) => Status::Pass,
        Err(d) => Status::Fail(d),
    }));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = (|| -> Result<(), String> {
        for _ in 0..20 {
            let n = rng.random_range(1..=4);
            let alg = SkeinAlgebra::new(n);
            let m = alg.basis(random_canonical(&mut rng, n, 3));
            let d = canonical_diagram(&m.terms().next().unwrap().0.clone(), Board::new(n)).map_err(|e| e.to_string())?;
            if resolve(&d).map_err(|e| e.to_string())? != m {
                return Err(format!("canonical drawing does not resolve to itself on {n} holes"));
            }
            if alg.multiply(&SkeinElement::unit(n), &m).map_err(|e| e.to_string())? != m {
                return Err("unit is not a left identity".into());
            }
        }
        Ok(())
    })();
    items.push(item("canonical drawings and unit", match unit {
        Ok(()) => Status::Pass,
        Err(d) => Status::Fail(d),
    }));
    let eps = epsilon_multiplicativity(seed, 20, 5);
    items.push(item("epsilon multiplicativity", match eps {
        Ok(w) => Status::check(w < 1e-9, || format!("worst relative defect {w:e}")),
        Err(d) => Status::Fail(d),
    }));
    items
}

pub fn chvar_suite(cfg: &Config) -> Vec<Item> {
    let f = chvar::fricke_trials(1000, 10, cfg.seed);
    let mut items = vec![item("fricke on 10x1000 random triples", Status::check(f < 1e-8, || format!("|f| = {f:e}")))];
    let scan_cfg = ScanConfig { t_samples: cfg.t_samples, b_samples: cfg.b_samples, seed: cfg.seed, ..Default::default() };
    let report = match chvar::nonvanishing_scan(&scan_cfg) {
        Ok(r) => r,
        Err(e) => {
            items.push(item("nonvanishing scan", Status::Fail(e.to_string())));
            return items;
        }
    };
    let s = chvar::summarize(&report);
    let need = (cfg.b_samples * 9).div_ceil(10);
    items.push(item(
        format!("X1 construction on >= {need} of {} b per t", cfg.b_samples),
        Status::check(s.min_built >= need, || format!("only {} built", s.min_built)),
    ));
    items.push(item(
        "X1 constraints and inverse-pair trace to 1e-9",
        Status::check(s.max_residual < 1e-9 && s.max_eq7_residual < 1e-9, || {
            format!("residual {:e}, inverse-pair trace residual {:e}", s.max_residual, s.max_eq7_residual)
        }),
    ));
    items.push(item("four distinct branches", Status::check(s.all_distinct, || "coincident branches".into())));
    items.push(item(
        "eps(e) nonvanishing >= 95%",
        Status::check(s.nonvanishing_fraction >= 0.95, || format!("fraction {:.3}", s.nonvanishing_fraction)),
    ));
    items.push(item(
        "zeros lie on the quadratic's roots",
        Status::check(s.unexplained_zeros == 0, || format!("{} of {} zeros unexplained", s.unexplained_zeros, s.zeros)),
    ));
    items.push(item(
        "eps(e^(n)) = 2 eps(e) gamma_n(eps(x))",
        Status::check(s.ratio_ok && s.route_ok, || "ratio identity violated".into()),
    ));
    let worst = s.sibling_fractions.iter().copied().fold(1.0, f64::min);
    items.push(item(
        "eight sibling elements nonvanishing >= 95%",
        Status::check(worst >= 0.95, || format!("fractions {:?}", s.sibling_fractions)),
    ));
    items
}

pub fn fixture_suite(dir: &Path, state_cap: usize) -> Vec<Item> {
    match verify_fixture_dir(dir, state_cap) {
        Ok(list) if list.is_empty() => vec![item("fixtures", Status::Fail(format!("no fixtures in {}", dir.display())))],
        Ok(list) => list
            .into_iter()
            .map(|(name, st)| {
                let status = match st {
                    FixtureStatus::Pass => Status::Pass,
                    FixtureStatus::Fail(d) => Status::Fail(d),
                    FixtureStatus::Skipped(d) => Status::Skipped(d),
                };
                item(name, status)
            })
            .collect(),
        Err(e) => vec![item("fixtures", Status::Fail(e.to_string()))],
    }
}

/// Run every suite concurrently; the report lists them in a fixed order.
pub fn run_all(cfg: &Config) -> VerificationReport {
    let suites = std::thread::scope(|scope| {
        let handles = vec![
            scope.spawn(|| timed("cheby", || cheby_suite(2 * cfg.max_n))),
            scope.spawn(|| timed("matrix", || matrix_suite(cfg.max_n))),
            scope.spawn(|| timed("ncrewrite", || ncrewrite_suite(cfg.max_n))),
            scope.spawn(|| timed("skein", || skein_suite(cfg.seed))),
            scope.spawn(|| timed("chvar", || chvar_suite(cfg))),
            scope.spawn(|| timed("fixtures", || fixture_suite(&cfg.fixture_dir, cfg.state_cap))),
        ];
        handles.into_iter().map(|h| h.join().expect("suite panicked")).collect()
    });
    VerificationReport { seed: cfg.seed, suites }
}

/// Write fixture templates under `dir`; returns one line per template.
pub fn emit_templates(dir: &Path, force: bool) -> Result<Vec<String>, String> {
    let written = emit_fixture_templates(dir, force).map_err(|e| e.to_string())?;
    Ok(written
        .into_iter()
        .map(|(name, w)| format!("{name}: {}", if w { "written" } else { "exists, kept" }))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parse() {
        let cfg = Config::parse("# c\nmax_n = 4\nseed=9\nfixture_dir = fx\n\n", Path::new("/a")).unwrap();
        assert_eq!(cfg.max_n, 4);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.fixture_dir, PathBuf::from("/a/fx"));
        assert_eq!(cfg.b_samples, 100);
        let e = Config::parse("max_n = 4\nbogus = 1\n", Path::new(".")).unwrap_err();
        assert_eq!(e, ConfigError::Line { line: 2, msg: "unknown key `bogus`".into() });
        let e = Config::parse("\nseed = x\n", Path::new(".")).unwrap_err();
        assert!(e.to_string().starts_with("line 2:"));
        assert!(Config::parse("max_n 4\n", Path::new(".")).is_err());
    }

    #[test]
    fn small_suites_pass() {
        assert!(cheby_suite(6).iter().all(|i| i.status == Status::Pass));
        assert!(matrix_suite(6).iter().all(|i| i.status == Status::Pass));
        assert!(ncrewrite_suite(3).iter().all(|i| i.status == Status::Pass));
    }
}
