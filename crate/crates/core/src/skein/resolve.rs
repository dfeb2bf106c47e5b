use std::collections::HashMap;
use std::thread;

use num_bigint::BigInt;
use num_complex::Complex64;

use crate::ring::LaurentScalar;

use super::diagram::{Curve, Diagram};
use super::element::{check_laminar, Multicurve, SkeinElement};
use super::geom::{ray_letters, Point, Q};
use super::word::CurveClass;
use super::SkeinError;

/// Default bound on the crossings of one connected component.
pub const DEFAULT_STATE_CAP: usize = 24;

/// Components with at least this many crossings are split across threads.
const PARALLEL_FROM: usize = 14;

/// A strand of the diagram between two consecutive crossing passages.
/// Half-edge ids are local to the component: `4k + slot` with slots
/// `0` leaving along strand `a`, `1` arriving along `a`, `2`, `3` likewise for `b`.
#[derive(Clone, Debug)]
struct Arc {
    start: usize,
    end: usize,
    letters: Vec<i32>,
    points: Vec<Point>,
}

#[derive(Clone, Debug)]
struct Component {
    /// Crossing-free curve, if this component is a single such curve.
    free_curve: Option<usize>,
    arcs: Vec<Arc>,
    /// For each half-edge: its arc and whether it is the arc's start.
    arc_at: Vec<(usize, bool)>,
    /// `partner[k][s][slot]`: the half-edge joined to `4k + slot` by smoothing
    /// `s` (0 for the `q^{1/2}` smoothing, 1 for `q^{-1/2}`).
    partner: Vec<[[usize; 4]; 2]>,
}

impl Component {
    fn crossings(&self) -> usize {
        self.partner.len()
    }
}

/// A loop produced by one state, as a word and optionally as a polyline.
struct TracedLoop {
    word: Vec<i32>,
    points: Vec<Point>,
}

/// The crossing structure of a diagram split into connected components.
pub struct Resolver<'a> {
    diagram: &'a Diagram,
    comps: Vec<Component>,
}

/// Per-component aggregation: classes and trivial-loop count of a state,
/// mapped to counts of `q^{1/2}` exponents and the first state seen.
type StateKey = (Vec<CurveClass>, u32);

#[derive(Default, Clone)]
struct Acc {
    exps: HashMap<i64, u64>,
    witness: u64,
}

fn half_edge(k: usize, strand_b: bool, leaving: bool) -> usize {
    4 * k + if strand_b { 2 } else { 0 } + if leaving { 0 } else { 1 }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

impl<'a> Resolver<'a> {
    pub fn new(diagram: &'a Diagram) -> Self {
        let nc = diagram.curves.len();
        let mut parent: Vec<usize> = (0..nc).collect();
        for x in &diagram.crossings {
            let (ra, rb) = (find(&mut parent, x.a.curve), find(&mut parent, x.b.curve));
            parent[ra] = rb;
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut group_of: HashMap<usize, usize> = HashMap::new();
        for c in 0..nc {
            let r = find(&mut parent, c);
            let g = *group_of.entry(r).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[g].push(c);
        }
        let mut crossings_of: Vec<Vec<usize>> = vec![Vec::new(); groups.len()];
        for (k, x) in diagram.crossings.iter().enumerate() {
            crossings_of[group_of[&find(&mut parent, x.a.curve)]].push(k);
        }
        let comps = groups
            .iter()
            .zip(&crossings_of)
            .map(|(curves, ks)| Self::component(diagram, curves, ks))
            .collect();
        Self { diagram, comps }
    }

    fn component(d: &Diagram, curves: &[usize], ks: &[usize]) -> Component {
        if ks.is_empty() {
            debug_assert_eq!(curves.len(), 1);
            return Component { free_curve: Some(curves[0]), arcs: vec![], arc_at: vec![], partner: vec![] };
        }
        let n = d.board.n;
        let local: HashMap<usize, usize> = ks.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let mut arcs = Vec::new();
        for &ci in curves {
            let curve = &d.curves[ci];
            let kv = curve.points.len();
            // (seg, t, local crossing, is strand b)
            let mut occ: Vec<(usize, &Q, usize, bool)> = Vec::new();
            for &k in ks {
                let x = &d.crossings[k];
                if x.a.curve == ci {
                    occ.push((x.a.seg, &x.a.t, local[&k], false));
                }
                if x.b.curve == ci {
                    occ.push((x.b.seg, &x.b.t, local[&k], true));
                }
            }
            occ.sort_by(|p, q| (p.0, p.1).cmp(&(q.0, q.1)));
            for j in 0..occ.len() {
                let (s0, t0, k0, b0) = occ[j];
                let (s1, t1, k1, b1) = occ[(j + 1) % occ.len()];
                let count = if (s1, t1) > (s0, t0) { s1 - s0 } else { s1 + kv - s0 };
                let mut points = Vec::with_capacity(count + 2);
                points.push(d.crossings[ks[k0]].point.clone());
                for m in 1..=count {
                    points.push(curve.points[(s0 + m) % kv].clone());
                }
                points.push(d.crossings[ks[k1]].point.clone());
                let mut letters = Vec::new();
                for w in points.windows(2) {
                    ray_letters(&w[0], &w[1], n, &mut letters);
                }
                arcs.push(Arc { start: half_edge(k0, b0, true), end: half_edge(k1, b1, false), letters, points });
            }
        }
        let mut arc_at = vec![(usize::MAX, false); 4 * ks.len()];
        for (i, a) in arcs.iter().enumerate() {
            arc_at[a.start] = (i, true);
            arc_at[a.end] = (i, false);
        }
        let partner = ks
            .iter()
            .enumerate()
            .map(|(lk, &k)| {
                let x = &d.crossings[k];
                let da = d.curves[x.a.curve].direction(x.a.seg);
                let db = d.curves[x.b.curve].direction(x.b.seg);
                let base = 4 * lk;
                // (leaving over, arriving over, leaving under, arriving under)
                let (po, mo, pu, mu, d_o, d_u) =
                    if x.a_over { (0, 1, 2, 3, da, db) } else { (2, 3, 0, 1, db, da) };
                let h = if d_o.cross(&d_u) > Q::from_integer(BigInt::from(0)) {
                    [po, pu, mo, mu]
                } else {
                    [po, mu, mo, pu]
                };
                let mut tab = [[0usize; 4]; 2];
                // rotating the over strand counterclockwise sweeps the sectors
                // (h0, h1) and (h2, h3); the q^{1/2} smoothing joins them
                for (s, pairs) in [[(h[1], h[2]), (h[3], h[0])], [(h[0], h[1]), (h[2], h[3])]].iter().enumerate() {
                    for &(u, v) in pairs {
                        tab[s][u] = base + v;
                        tab[s][v] = base + u;
                    }
                }
                tab
            })
            .collect();
        Component { free_curve: None, arcs, arc_at, partner }
    }

    /// Largest crossing count among connected components.
    pub fn max_component_crossings(&self) -> usize {
        self.comps.iter().map(Component::crossings).max().unwrap_or(0)
    }

    fn trace(&self, comp: &Component, state: u64, with_points: bool, delta: &Q) -> Vec<TracedLoop> {
        let nh = 4 * comp.crossings();
        let mut visited = vec![false; nh];
        let mut out = Vec::new();
        for e0 in 0..nh {
            if visited[e0] {
                continue;
            }
            let mut word = Vec::new();
            let mut points = Vec::new();
            let mut e = e0;
            loop {
                visited[e] = true;
                let (ai, fwd) = comp.arc_at[e];
                let arc = &comp.arcs[ai];
                let f = if fwd {
                    word.extend_from_slice(&arc.letters);
                    arc.end
                } else {
                    word.extend(arc.letters.iter().rev().map(|l| -l));
                    arc.start
                };
                if with_points {
                    let mut p: Vec<&Point> = arc.points.iter().collect();
                    if !fwd {
                        p.reverse();
                    }
                    let last = p.len() - 1;
                    points.push(p[0].lerp(p[1], delta));
                    points.extend(p[1..last].iter().map(|&x| x.clone()));
                    points.push(p[last].lerp(p[last - 1], delta));
                }
                visited[f] = true;
                let k = f / 4;
                let s = ((state >> k) & 1) as usize;
                let g = comp.partner[k][s][f % 4];
                if g == e0 {
                    break;
                }
                e = g;
            }
            out.push(TracedLoop { word, points });
        }
        out
    }

    fn enumerate_range(&self, comp: &Component, lo: u64, hi: u64) -> Result<HashMap<StateKey, Acc>, SkeinError> {
        let c = comp.crossings() as i64;
        let zero = Q::from_integer(BigInt::from(0));
        let mut acc: HashMap<StateKey, Acc> = HashMap::new();
        for state in lo..hi {
            let mut classes = Vec::new();
            let mut trivial = 0u32;
            for l in self.trace(comp, state, false, &zero) {
                let cl = CurveClass::from_word(&l.word);
                if cl.is_trivial() {
                    trivial += 1;
                } else {
                    classes.push(cl);
                }
            }
            check_laminar(&classes).map_err(|e| SkeinError::Internal(format!("state {state}: {e}")))?;
            classes.sort();
            let exp = c - 2 * state.count_ones() as i64;
            let slot = acc.entry((classes, trivial)).or_insert_with(|| Acc { exps: HashMap::new(), witness: state });
            *slot.exps.entry(exp).or_insert(0) += 1;
        }
        Ok(acc)
    }

    fn enumerate(&self, comp: &Component) -> Result<HashMap<StateKey, Acc>, SkeinError> {
        let c = comp.crossings();
        let total = 1u64 << c;
        if c < PARALLEL_FROM {
            return self.enumerate_range(comp, 0, total);
        }
        let workers = thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(16) as u64;
        let chunk = total.div_ceil(workers);
        let parts: Vec<Result<HashMap<StateKey, Acc>, SkeinError>> = thread::scope(|s| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let (lo, hi) = (w * chunk, ((w + 1) * chunk).min(total));
                    s.spawn(move || self.enumerate_range(comp, lo, hi))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("state-sum worker panicked")).collect()
        });
        let mut merged: HashMap<StateKey, Acc> = HashMap::new();
        for part in parts {
            for (key, a) in part? {
                let slot = merged.entry(key).or_insert_with(|| Acc { exps: HashMap::new(), witness: a.witness });
                slot.witness = slot.witness.min(a.witness);
                for (e, n) in a.exps {
                    *slot.exps.entry(e).or_insert(0) += n;
                }
            }
        }
        Ok(merged)
    }

    /// The state sum, together with one state per resulting multicurve
    /// (a state index for every component).
    pub fn run(&self, cap: usize) -> Result<(SkeinElement, HashMap<Multicurve, Vec<u64>>), SkeinError> {
        let worst = self.max_component_crossings();
        if worst > cap {
            return Err(SkeinError::StateCap { crossings: worst, cap });
        }
        let n = self.diagram.board.n;
        let neg_alpha = -LaurentScalar::alpha();
        // partial products: classes -> (coefficient, witness states so far)
        let mut partial: HashMap<Vec<CurveClass>, (LaurentScalar, Vec<u64>)> = HashMap::new();
        partial.insert(Vec::new(), (LaurentScalar::one(), Vec::new()));
        for comp in &self.comps {
            let local: Vec<(Vec<CurveClass>, LaurentScalar, u64)> = match comp.free_curve {
                Some(ci) => {
                    let cl = self.diagram.curves[ci].class(n);
                    if cl.is_trivial() {
                        vec![(Vec::new(), neg_alpha.clone(), 0)]
                    } else {
                        vec![(vec![cl], LaurentScalar::one(), 0)]
                    }
                }
                None => {
                    let mut v: Vec<_> = self
                        .enumerate(comp)?
                        .into_iter()
                        .map(|((classes, trivial), a)| {
                            let poly =
                                LaurentScalar::from_terms(a.exps.into_iter().map(|(e, k)| (e, BigInt::from(k))));
                            (classes, poly * neg_alpha.pow(trivial), a.witness)
                        })
                        .collect();
                    v.sort_by(|x, y| x.0.cmp(&y.0).then(x.2.cmp(&y.2)));
                    v
                }
            };
            let mut next: HashMap<Vec<CurveClass>, (LaurentScalar, Vec<u64>)> = HashMap::new();
            for (classes, (coeff, wit)) in &partial {
                for (lc, lcoeff, lw) in &local {
                    let mut key = classes.clone();
                    key.extend(lc.iter().cloned());
                    key.sort();
                    let mut w = wit.clone();
                    w.push(*lw);
                    let prod = coeff * lcoeff;
                    match next.get_mut(&key) {
                        Some(slot) => {
                            slot.0 += &prod;
                            if w < slot.1 {
                                slot.1 = w;
                            }
                        }
                        None => {
                            next.insert(key, (prod, w));
                        }
                    }
                }
            }
            partial = next;
        }
        let mut out = SkeinElement::zero(n);
        let mut witnesses = HashMap::new();
        for (classes, (coeff, wit)) in partial {
            let m = Multicurve::new(classes).map_err(|e| SkeinError::Internal(e.to_string()))?;
            if !coeff.is_zero() {
                witnesses.insert(m.clone(), wit);
            }
            out.add_term(m, coeff);
        }
        Ok((out, witnesses))
    }

    /// The curves of one state, smoothed by cutting each crossing corner at
    /// fraction `delta` of the adjacent edges. Trivial loops are dropped.
    pub fn realize(&self, states: &[u64], delta: &Q) -> Vec<Curve> {
        let n = self.diagram.board.n;
        let mut out = Vec::new();
        for (comp, &state) in self.comps.iter().zip(states) {
            match comp.free_curve {
                Some(ci) => {
                    let c = &self.diagram.curves[ci];
                    if !c.class(n).is_trivial() {
                        out.push(c.clone());
                    }
                }
                None => {
                    for l in self.trace(comp, state, true, delta) {
                        if !CurveClass::from_word(&l.word).is_trivial() {
                            out.push(Curve::new(format!("m{}", out.len() + 1), l.points));
                        }
                    }
                }
            }
        }
        for (i, c) in out.iter_mut().enumerate() {
            c.name = format!("m{}", i + 1);
        }
        out
    }

    /// The state sum evaluated at `q^{1/2} = -1`, with each loop valued by
    /// `eval_loop` on its word. Trivial loops go through `eval_loop` too.
    pub fn classical(&self, eval_loop: &dyn Fn(&[i32]) -> Complex64) -> Complex64 {
        let n = self.diagram.board.n;
        let zero = Q::from_integer(BigInt::from(0));
        let mut total = Complex64::new(1.0, 0.0);
        for comp in &self.comps {
            let v = match comp.free_curve {
                Some(ci) => eval_loop(self.diagram.curves[ci].class(n).word()),
                None => {
                    let c = comp.crossings();
                    // q^{(a-b)/2} at q^{1/2} = -1 is (-1)^{a+b} for every state
                    let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
                    let mut s = Complex64::new(0.0, 0.0);
                    for state in 0..(1u64 << c) {
                                                let prod: Complex64 =
                            self.trace(comp, state, false, &zero).iter().map(|l| eval_loop(&l.word)).product();
                        s += prod * sign;
                    }
                    s
                }
            };
            total *= v;
        }
        total
    }
}

/// Resolve a diagram into the multicurve basis with the default state cap.
pub fn resolve(d: &Diagram) -> Result<SkeinElement, SkeinError> {
    resolve_capped(d, DEFAULT_STATE_CAP)
}

pub fn resolve_capped(d: &Diagram, cap: usize) -> Result<SkeinElement, SkeinError> {
    Resolver::new(d).run(cap).map(|(e, _)| e)
}
