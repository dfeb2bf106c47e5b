use std::fmt::Write as _;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cheby::{gamma_numeric, kappa};

use super::mat::{inv_sl2, tr_prod, C};
use super::x1::{branches_distinct, build_all_branches, tangle_traces, ReprPoint, Tangle, TraceData};
use super::ChvarError;

/// Classical values of the basic curves at a point; index `i - 1` holds curve `i`.
#[derive(Clone, Debug)]
pub struct EpsilonBasics {
    pub t: C,
    pub x: C,
    pub ell: [C; 4],
    pub ell_direct: [C; 4],
    pub u: [C; 4],
    pub u_direct: [C; 4],
}

pub fn epsilon_basics(p: &ReprPoint) -> EpsilonBasics {
    let t = p.data.t;
    let mut ell = [C::new(0.0, 0.0); 4];
    let mut ell_direct = ell;
    let mut u = ell;
    let mut u_direct = ell;
    for i in 1..=4i64 {
        let k = (i - 1) as usize;
        let t3 = p.t3(i - 1, i, i + 1);
        ell[k] = t * (p.t2(i, i + 1) + p.t2(i - 1, i) - t * t) - t3;
        u[k] = -t * p.t2(i - 1, i + 1) + t3;
        ell_direct[k] = -tr_prod(&[&inv_sl2(p.xm(i - 1)), p.xm(i), &inv_sl2(p.xm(i + 1))]);
        u_direct[k] = -tr_prod(&[p.xm(i - 1), &inv_sl2(p.xm(i)), p.xm(i + 1)]);
    }
    EpsilonBasics { t: -t, x: p.t2(2, 4) - t * t, ell, ell_direct, u, u_direct }
}

/// `kappa_n` at `q^{1/2} = -1`, as numeric `(x-degree, r-degree, coefficient)` triples.
#[derive(Clone, Debug)]
pub struct ClassicalKappa(Vec<Vec<(i32, i32, f64)>>);

impl ClassicalKappa {
    pub fn new(n_max: usize) -> Self {
        let polys = (1..=n_max)
            .map(|n| {
                kappa(n)
                    .specialize_classical()
                    .terms()
                    .map(|(m, c)| {
                        let v = c.coeff(0).to_string().parse::<f64>().expect("integer coefficient");
                        (m.exps()[0] as i32, m.exps()[1] as i32, v)
                    })
                    .collect()
            })
            .collect();
        Self(polys)
    }

    pub fn n_max(&self) -> usize {
        self.0.len()
    }

    pub fn eval(&self, n: usize, x: C, r: C) -> C {
        self.0[n - 1].iter().map(|&(a, b, v)| x.powi(a) * r.powi(b) * v).sum()
    }
}

/// Classical values of the torsion elements at a point.
#[derive(Clone, Debug)]
pub struct TorsionEval {
    /// `eps(e)` with `e = (u_3 - l_3)(l_1 - l'_1)`.
    pub e: C,
    /// `eps(e_i)` for `i = 1..4` (`e_1 = e`).
    pub e_i: [C; 4],
    /// `eps(e~_i)` for `i = 1..4`.
    pub e_tilde: [C; 4],
    pub lp1_minus_l1: C,
    pub u3_minus_l3: C,
    /// `2 eps(e) gamma_n(eps(x))` for `n = 1..=n_max`.
    pub e_n: Vec<C>,
    /// `eps(e^{(n)})` evaluated term by term from `kappa_n`, with `eps(r)`
    /// taken from the meridian relation `x t = q l'_1 + q^-1 l_1 + t r`.
    pub e_n_direct: Vec<C>,
}

pub fn epsilon_torsion_elements(p: &ReprPoint, kap: &ClassicalKappa) -> TorsionEval {
    let eb = epsilon_basics(p);
    let idx = |i: usize| (i + 3) % 4; // curve i (1-based, mod 4) -> slot
    let outer = |i: usize| eb.u[idx(i + 2)] - eb.ell[idx(i + 2)];
    let mut e_i = [C::new(0.0, 0.0); 4];
    let mut e_tilde = e_i;
    for i in 1..=4 {
        e_i[i - 1] = outer(i) * (eb.ell[idx(i)] - eb.u[idx(i)]);
        // eps(u'_i) = eps(l_i) by the same reflection that gives eps(u_i) = eps(l'_i)
        e_tilde[i - 1] = outer(i) * (eb.u[idx(i)] - eb.ell[idx(i)]);
    }
    let e = e_i[0];
    let (ex, et) = (eb.x, eb.t);
    let (l1, lp1) = (eb.ell[0], eb.u[0]);
    let w = outer(1);
    let er = (ex * et - lp1 - l1) / et;
    let mut e_n = Vec::new();
    let mut e_n_direct = Vec::new();
    for n in 1..=kap.n_max() {
        let g = gamma_numeric(n, ex);
        e_n.push(2.0 * e * g);
        e_n_direct.push(2.0 * w * (kap.eval(n, ex, er) * et + 2.0 * l1 * g));
    }
    TorsionEval { e, e_i, e_tilde, lp1_minus_l1: lp1 - l1, u3_minus_l3: w, e_n, e_n_direct }
}

/// Coefficients `(c0, c1, c2)` of the quadratic in `y = t_24` whose roots are
/// where `2 t_{124} = t (t_12 + t_41 + y - t^2)` is compatible with the
/// Fricke relation.
pub fn vanishing_quadratic(t: C, ta: C, tb: C) -> [C; 3] {
    let t2 = t * t;
    let a = ta + tb;
    let p = ta * tb;
    let c2 = t2 / 4.0 - 1.0;
    let c1 = t2 * (a - t2) / 2.0 + t2 - p;
    let c0 = t2 * (a - t2) * (a - t2) / 4.0 + t2 * (a - 3.0) - (ta * ta + tb * tb - 4.0);
    [c0, c1, c2]
}

pub fn quadratic_roots(q: [C; 3]) -> Vec<C> {
    let [c0, c1, c2] = q;
    if c2.norm() < 1e-14 {
        return if c1.norm() < 1e-14 { Vec::new() } else { vec![-c0 / c1] };
    }
    let d = (c1 * c1 - 4.0 * c2 * c0).sqrt();
    vec![(-c1 + d) / (2.0 * c2), (-c1 - d) / (2.0 * c2)]
}

/// Roots of both vanishing quadratics (for `l'_1 - l_1` and `u_3 - l_3`).
pub fn vanishing_locus(d: &TraceData) -> Vec<C> {
    let mut out = quadratic_roots(vanishing_quadratic(d.t, d.adjacent(2), d.adjacent(1)));
    out.extend(quadratic_roots(vanishing_quadratic(d.t, d.adjacent(3), d.adjacent(4))));
    out
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub tangles: [Tangle; 4],
    pub t_samples: usize,
    pub b_samples: usize,
    pub n_max: usize,
    pub seed: u64,
    /// `b` is drawn uniformly from the square of this half-width.
    pub b_radius: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            tangles: [Tangle::Fraction(1, 3); 4],
            t_samples: 8,
            b_samples: 100,
            n_max: 16,
            seed: 1,
            b_radius: 3.0,
        }
    }
}

pub const ZERO_TOL: f64 = 1e-6;
pub const RATIO_TOL: f64 = 1e-7;

#[derive(Clone, Debug)]
pub struct BranchEval {
    pub branches: (bool, bool),
    pub eps: TorsionEval,
    /// `eps(e^{(n)}) / eps(e^{(1)}) = gamma_n(eps(x))` for all `n`, relative to
    /// `max(1, |gamma_n|)`, with both values from the term-by-term route.
    pub ratio_ok: bool,
    /// The term-by-term route agrees with `2 eps(e) gamma_n(eps(x))`.
    pub route_ok: bool,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct PointEval {
    pub branches: Vec<BranchEval>,
    pub distinct: bool,
    pub eq7_residual: f64,
}

#[derive(Clone, Debug)]
pub struct ScanPoint {
    pub b: C,
    pub result: Result<PointEval, String>,
}

#[derive(Clone, Debug)]
pub struct TScan {
    pub t: C,
    pub s: [C; 4],
    pub points: Vec<ScanPoint>,
}

#[derive(Clone, Debug)]
pub struct ScanReport {
    pub seed: u64,
    pub n_max: usize,
    pub scans: Vec<TScan>,
}

fn rel_close(a: C, b: C, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

fn evaluate_branch(p: &ReprPoint, kap: &ClassicalKappa) -> BranchEval {
    let eps = epsilon_torsion_elements(p, kap);
    let e1 = eps.e_n_direct[0];
    let ex = p.t2(2, 4) - p.data.t * p.data.t;
    let ratio_ok = e1.norm() < ZERO_TOL
        || (1..=kap.n_max()).all(|n| rel_close(eps.e_n_direct[n - 1] / e1, gamma_numeric(n, ex), RATIO_TOL));
    let route_ok = eps
        .e_n
        .iter()
        .zip(&eps.e_n_direct)
        .all(|(a, b)| (a - b).norm() <= RATIO_TOL * (1.0 + a.norm().max(b.norm())));
    BranchEval { branches: p.branches, eps, ratio_ok, route_ok, residual: p.residual }
}

/// Evaluate all four branches at one `(t, s, b)`.
pub fn evaluate_point(d: &TraceData, kap: &ClassicalKappa) -> Result<PointEval, ChvarError> {
    let pts = build_all_branches(d)?;
    let eq7 = pts
        .iter()
        .map(|p| (p.inverse_pair_trace() - (d.t * d.t - d.b)).norm() / (1.0 + d.b.norm()))
        .fold(0.0, f64::max);
    Ok(PointEval {
        distinct: branches_distinct(&pts),
        branches: pts.iter().map(|p| evaluate_branch(p, kap)).collect(),
        eq7_residual: eq7,
    })
}

/// Draw a meridian trace `t = 2 cos(theta)` away from `+-2` whose tangle
/// traces exist, retrying on non-generic draws.
fn draw_t(rng: &mut ChaCha8Rng, tangles: &[Tangle; 4]) -> Result<(C, [C; 4]), ChvarError> {
    let mut last = None;
    for _ in 0..32 {
        let theta = rng.random_range(0.2..(std::f64::consts::PI - 0.2));
        let t = C::new(2.0 * theta.cos(), 0.0);
        match tangle_traces(tangles, t) {
            Ok(s) => return Ok((t, s)),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| ChvarError::NonGeneric("no admissible t".into())))
}

fn scan_one_t(cfg: &ScanConfig, index: usize, kap: &ClassicalKappa) -> Result<TScan, ChvarError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(index as u64));
    let (t, s) = draw_t(&mut rng, &cfg.tangles)?;
    let mut points = Vec::with_capacity(cfg.b_samples);
    for _ in 0..cfg.b_samples {
        let b = C::new(rng.random_range(-cfg.b_radius..cfg.b_radius), rng.random_range(-cfg.b_radius..cfg.b_radius));
        let result = TraceData::new(t, s, b)
            .and_then(|d| evaluate_point(&d, kap))
            .map_err(|e| e.to_string());
        points.push(ScanPoint { b, result });
    }
    Ok(TScan { t, s, points })
}

/// Scan `t_samples` meridian traces in parallel, `b_samples` values of `b` each.
pub fn nonvanishing_scan(cfg: &ScanConfig) -> Result<ScanReport, ChvarError> {
    if cfg.b_samples < 32 {
        return Err(ChvarError::Config(format!("b_samples = {} is below the minimum of 32", cfg.b_samples)));
    }
    if cfg.n_max == 0 {
        return Err(ChvarError::Config("n_max must be at least 1".into()));
    }
    let kap = Arc::new(ClassicalKappa::new(cfg.n_max));
    let results: Vec<Result<TScan, ChvarError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..cfg.t_samples)
            .map(|i| {
                let kap = kap.clone();
                scope.spawn(move || scan_one_t(cfg, i, &kap))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("scan thread panicked")).collect()
    });
    let scans = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let report = ScanReport { seed: cfg.seed, n_max: cfg.n_max, scans };
    if report.scans.iter().all(|s| {
        s.points.iter().all(|p| match &p.result {
            Ok(pe) => pe.branches.iter().all(|b| b.eps.e.norm() <= ZERO_TOL),
            Err(_) => true,
        })
    }) {
        return Err(ChvarError::AllZero);
    }
    Ok(report)
}

/// Aggregate statistics of a scan.
#[derive(Clone, Debug, Default)]
pub struct ScanSummary {
    pub t_count: usize,
    pub b_total: usize,
    /// Smallest number of successful builds over the sampled `t`.
    pub min_built: usize,
    pub all_distinct: bool,
    pub max_residual: f64,
    pub max_eq7_residual: f64,
    /// Fraction of built `b` where `|eps(e)| > 1e-6` on every branch.
    pub nonvanishing_fraction: f64,
    /// For each of the eight elements `e_1..e_4, e~_1..e~_4`, the fraction of
    /// built `b` where it is nonzero on at least one branch. With equal
    /// tangles two branches have `x_1 = x_3`, where `l_2 = l'_2 = 0`.
    pub sibling_fractions: [f64; 8],
    pub zeros: usize,
    pub unexplained_zeros: usize,
    pub ratio_ok: bool,
    pub route_ok: bool,
}

pub fn summarize(report: &ScanReport) -> ScanSummary {
    let mut s = ScanSummary { all_distinct: true, ratio_ok: true, route_ok: true, min_built: usize::MAX, ..Default::default() };
    let mut built_total = 0usize;
    let mut nonzero = 0usize;
    let mut sib = [0usize; 8];
    for scan in &report.scans {
        s.t_count += 1;
        let mut built = 0;
        for p in &scan.points {
            s.b_total += 1;
            let Ok(pe) = &p.result else { continue };
            built += 1;
            s.all_distinct &= pe.distinct;
            s.max_eq7_residual = s.max_eq7_residual.max(pe.eq7_residual);
            let mut all_nonzero = true;
            for br in &pe.branches {
                s.max_residual = s.max_residual.max(br.residual);
                s.ratio_ok &= br.ratio_ok;
                s.route_ok &= br.route_ok;
                if br.eps.e.norm() <= ZERO_TOL {
                    all_nonzero = false;
                    s.zeros += 1;
                    let d = TraceData { t: scan.t, s: scan.s, b: p.b };
                    if !vanishing_locus(&d).iter().any(|r| (r - p.b).norm() <= ZERO_TOL) {
                        s.unexplained_zeros += 1;
                    }
                }
            }
            if all_nonzero {
                nonzero += 1;
            }
            for (k, slot) in sib.iter_mut().enumerate() {
                let ok = pe.branches.iter().any(|br| {
                    let v = if k < 4 { br.eps.e_i[k] } else { br.eps.e_tilde[k - 4] };
                    v.norm() > ZERO_TOL
                });
                *slot += ok as usize;
            }
        }
        s.min_built = s.min_built.min(built);
        built_total += built;
    }
    if s.t_count == 0 {
        s.min_built = 0;
    }
    let denom = built_total.max(1) as f64;
    s.nonvanishing_fraction = nonzero as f64 / denom;
    for k in 0..8 {
        s.sibling_fractions[k] = sib[k] as f64 / denom;
    }
    s
}

pub fn format_complex(z: C) -> String {
    format!("{:.9}{:+.9}i", z.re, z.im)
}

/// Plain-text scan report, one line per `b`.
pub fn render_scan(report: &ScanReport) -> String {
    let mut out = String::new();
    for scan in &report.scans {
        let _ = writeln!(out, "t={}", format_complex(scan.t));
        for p in &scan.points {
            match &p.result {
                Ok(pe) => {
                    let ok = pe.branches.iter().all(|b| b.ratio_ok && b.route_ok);
                    let _ = writeln!(
                        out,
                        "b={} eps_e={} eps_en_ratio_ok={ok}",
                        format_complex(p.b),
                        format_complex(pe.branches[0].eps.e)
                    );
                }
                Err(e) => {
                    let _ = writeln!(out, "b={} skipped: {e}", format_complex(p.b));
                }
            }
        }
    }
    out
}
