//! Shared test helpers: an independent brute-force state-sum oracle and
//! random diagram generators.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use skein_torsion::ring::LaurentScalar;
use skein_torsion::skein::{q, qi, resolve, Board, Curve, Diagram, Point, RawCrossing, SkeinElement, Q};

/// Laurent polynomial in `h = q^{1/2}`, exponent -> coefficient.
pub type Poly = BTreeMap<i64, i128>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            *out.entry(ea + eb).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn poly_add(into: &mut Poly, b: &Poly) {
    for (e, c) in b {
        *into.entry(*e).or_insert(0) += c;
    }
    into.retain(|_, c| *c != 0);
}

/// Canonical key of a loop: the least rotation of the cyclically reduced
/// word or of its inverse.
fn canon(word: &[i32]) -> Vec<i32> {
    let mut w: Vec<i32> = Vec::new();
    for &l in word {
        if w.last() == Some(&-l) {
            w.pop();
        } else {
            w.push(l);
        }
    }
    while w.len() >= 2 && w[0] == -w[w.len() - 1] {
        w.remove(0);
        w.pop();
    }
    if w.is_empty() {
        return w;
    }
    let inv: Vec<i32> = w.iter().rev().map(|l| -l).collect();
    let mut best: Option<Vec<i32>> = None;
    for base in [&w, &inv] {
        for k in 0..base.len() {
            let r: Vec<i32> = base[k..].iter().chain(&base[..k]).copied().collect();
            if best.as_ref().is_none_or(|b| r < *b) {
                best = Some(r);
            }
        }
    }
    best.unwrap()
}

/// Word of a closed polyline: crossings of the rays `x = i, y > 0`, with a
/// point on the line `x = i` counted as left of the ray.
fn read_word(pts: &[Point], n: usize) -> Vec<i32> {
    let mut w = Vec::new();
    for k in 0..pts.len() {
        let (a, b) = (&pts[k], &pts[(k + 1) % pts.len()]);
        let mut hits: Vec<(Q, i32)> = Vec::new();
        for i in 1..=n {
            let xi = qi(i as i64);
            let la = a.x <= xi;
            let lb = b.x <= xi;
            if la == lb {
                continue;
            }
            let t = (&xi - &a.x) / (&b.x - &a.x);
            let y = &a.y + &t * (&b.y - &a.y);
            if y.is_positive() {
                hits.push((t, if la { i as i32 } else { -(i as i32) }));
            }
        }
        hits.sort_by(|x, y| x.0.cmp(&y.0));
        w.extend(hits.into_iter().map(|h| h.1));
    }
    w
}

fn angle(d: &Point) -> f64 {
    let (x, y) = d.to_f64();
    y.atan2(x)
}

/// A piece of a curve between two crossing passages, shortened at both ends.
struct Piece {
    pts: Vec<Point>,
}

/// Expansion of a diagram over all `2^c` states at once, keyed by the sorted
/// canonical words of the nontrivial loops.
pub fn naive_resolve(d: &Diagram) -> BTreeMap<Vec<Vec<i32>>, Poly> {
    let n = d.board.n;
    let c = d.crossings.len();
    assert!(c <= 16, "oracle is exponential");
    // passages: (curve, seg, t, crossing index)
    let mut per_curve: Vec<Vec<(usize, Q, usize)>> = vec![Vec::new(); d.curves.len()];
    for (k, x) in d.crossings.iter().enumerate() {
        per_curve[x.a.curve].push((x.a.seg, x.a.t.clone(), k));
        per_curve[x.b.curve].push((x.b.seg, x.b.t.clone(), k));
    }
    let delta = q(1, 1000);
    let mut pieces: Vec<Piece> = Vec::new();
    let mut closed: Vec<Vec<Point>> = Vec::new();
    // ports[k]: (piece index, at start?, outward direction from the crossing)
    let mut ports: Vec<Vec<(usize, bool, Point)>> = vec![Vec::new(); c];
    for (ci, curve) in d.curves.iter().enumerate() {
        let pv = &curve.points;
        let m = pv.len();
        let mut pass = per_curve[ci].clone();
        if pass.is_empty() {
            closed.push(pv.clone());
            continue;
        }
        pass.sort_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)));
        for j in 0..pass.len() {
            let (s0, ref t0, k0) = pass[j];
            let (s1, ref t1, k1) = pass[(j + 1) % pass.len()];
            let x0 = d.crossings[k0].point.clone();
            let x1 = d.crossings[k1].point.clone();
            let mut inner: Vec<Point> = Vec::new();
            let mut s = s0;
            let wrap = !((s1, t1) > (s0, t0));
            let steps = if wrap { s1 + m - s0 } else { s1 - s0 };
            for _ in 0..steps {
                s = (s + 1) % m;
                inner.push(pv[s].clone());
            }
            let first_dir = inner.first().unwrap_or(&x1).sub(&x0);
            let last_dir = inner.last().unwrap_or(&x0).sub(&x1);
            let start = x0.add(&first_dir.scale(&delta));
            let end = x1.add(&last_dir.scale(&delta));
            let mut pts = vec![start];
            pts.extend(inner);
            pts.push(end);
            let idx = pieces.len();
            ports[k0].push((idx, true, first_dir));
            ports[k1].push((idx, false, last_dir));
            pieces.push(Piece { pts });
        }
    }
    // smoothing pairs of port indices for each crossing and choice
    let mut pairs: Vec<[[(usize, usize); 2]; 2]> = Vec::new();
    for (k, x) in d.crossings.iter().enumerate() {
        let mut order: Vec<usize> = (0..4).collect();
        order.sort_by(|&i, &j| angle(&ports[k][i].2).total_cmp(&angle(&ports[k][j].2)));
        let over_curve = x.over().curve;
        let over_dir = d.curves[over_curve].direction(x.over().seg);
        // rotate so that order[0] is a port along the over strand
        let is_over = |i: usize| {
            let dir = &ports[k][i].2;
            dir.cross(&over_dir).is_zero()
        };
        let r = (0..4).find(|&s| is_over(order[s])).unwrap();
        order.rotate_left(r);
        let h = [order[0], order[1], order[2], order[3]];
        pairs.push([[(h[1], h[2]), (h[3], h[0])], [(h[0], h[1]), (h[2], h[3])]]);
    }
    let neg_alpha: Poly = [(-2, -1), (2, -1)].into_iter().collect();
    let base_words: Vec<Vec<i32>> = closed.iter().map(|p| canon(&read_word(p, n))).collect();
    let mut out: BTreeMap<Vec<Vec<i32>>, Poly> = BTreeMap::new();
    for state in 0u64..(1u64 << c) {
        // port partner within each crossing
        let mut mate: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        for k in 0..c {
            let s = ((state >> k) & 1) as usize;
            for &(u, v) in &pairs[k][s] {
                mate.insert((k, u), (k, v));
                mate.insert((k, v), (k, u));
            }
        }
        // piece end -> port
        let mut port_of: HashMap<(usize, bool), (usize, usize)> = HashMap::new();
        for (k, ps) in ports.iter().enumerate() {
            for (i, p) in ps.iter().enumerate() {
                port_of.insert((p.0, p.1), (k, i));
            }
        }
        let mut used = vec![false; pieces.len()];
        let mut words = base_words.clone();
        for p0 in 0..pieces.len() {
            if used[p0] {
                continue;
            }
            let mut poly_pts: Vec<Point> = Vec::new();
            let (mut p, mut forward) = (p0, true);
            loop {
                used[p] = true;
                let pts = &pieces[p].pts;
                if forward {
                    poly_pts.extend(pts.iter().cloned());
                } else {
                    poly_pts.extend(pts.iter().rev().cloned());
                }
                let exit = port_of[&(p, !forward)];
                let (k, j) = mate[&exit];
                let (np, at_start, _) = ports[k][j].clone();
                if np == p0 {
                    debug_assert!(at_start);
                    break;
                }
                p = np;
                forward = at_start;
            }
            words.push(canon(&read_word(&poly_pts, n)));
        }
        let b = state.count_ones() as i64;
        let mut coeff: Poly = [(c as i64 - 2 * b, 1)].into_iter().collect();
        words.retain(|w| {
            if w.is_empty() {
                coeff = poly_mul(&coeff, &neg_alpha);
                false
            } else {
                true
            }
        });
        words.sort();
        poly_add(out.entry(words).or_default(), &coeff);
    }
    out.retain(|_, p| !p.is_empty());
    out
}

/// The same data read off an engine result.
pub fn engine_map(e: &SkeinElement) -> BTreeMap<Vec<Vec<i32>>, Poly> {
    let mut out = BTreeMap::new();
    for (m, c) in e.terms() {
        let mut key: Vec<Vec<i32>> = m.classes().iter().map(|cl| canon(cl.word())).collect();
        key.sort();
        let poly: Poly = c.terms().map(|(e, v)| (e, v.to_i128().unwrap())).collect();
        out.insert(key, poly);
    }
    out
}

/// A random rational in `[lo, hi]` with denominator `den`.
fn rand_q(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> Q {
    q(rng.random_range(lo * den..=hi * den), den)
}

/// Random closed polylines on an `n`-hole board, retried until valid and
/// with at most `max_cross` crossings; over/under chosen at random.
pub fn random_diagram(rng: &mut ChaCha8Rng, n: usize, max_cross: usize) -> Diagram {
    loop {
        let k = rng.random_range(1..=3usize);
        let curves: Vec<Curve> = (0..k)
            .map(|ci| {
                let v = rng.random_range(3..=6usize);
                let pts = (0..v)
                    .map(|_| Point::new(rand_q(rng, 0, n as i64 + 1, 13), rand_q(rng, -2, 2, 11)))
                    .collect();
                Curve::new(format!("c{}", ci + 1), pts)
            })
            .collect();
        let d = Diagram::build(Board::new(n), curves, |_| rng.random_bool(0.5));
        if let Ok(d) = d {
            if d.crossing_count() <= max_cross {
                return d;
            }
        }
    }
}

fn perp(d: &Point) -> Point {
    Point::new(-d.y.clone(), d.x.clone())
}

/// The five-vertex curl `(0,0) (2,1) (1,2) (1,-1) (3,0)` placed along `dir` at `m`.
pub fn kink(m: &Point, dir: &Point, s: &Q, flip: bool) -> Vec<Point> {
    let p = if flip { perp(dir).scale(&q(-1, 1)) } else { perp(dir) };
    [(0, 0), (2, 1), (1, 2), (1, -1), (3, 0)]
        .iter()
        .map(|&(a, b)| m.add(&dir.scale(&(s * q(a, 1)))).add(&p.scale(&(s * q(b, 1)))))
        .collect()
}

/// Rebuild `d` with `curves`, copying over/under data at unchanged crossing
/// points and deciding new ones with `fresh`.
pub fn rebuild(d: &Diagram, curves: Vec<Curve>, mut fresh: impl FnMut(&RawCrossing) -> bool) -> Option<Diagram> {
    let old = d.clone();
    Diagram::build(d.board, curves, |r| match old.crossings.iter().find(|c| c.point == r.point) {
        Some(c) => c.a_over,
        None => fresh(r),
    })
    .ok()
    .filter(|nd| d.crossings.iter().all(|c| nd.crossings.iter().any(|x| x.point == c.point)))
}

/// Random R1 curls, R2 loops across a strand and R3 loops around a crossing
/// inserted into random diagrams; returns how many of each were checked.
pub fn check_local_moves(seed: u64, target: usize) -> Result<[usize; 3], String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = [0usize; 3];
    let mut attempts = 0;
    while done.iter().sum::<usize>() < target {
        attempts += 1;
        if attempts >= 5000 {
            return Err("could not place local moves".into());
        }
        let n = rng.random_range(0..=3);
        let d = random_diagram(&mut rng, n, 7);
        let base = resolve(&d).map_err(|e| e.to_string())?;
        let kind = attempts % 3;
        let ci = rng.random_range(0..d.curves.len());
        let seg = rng.random_range(0..d.curves[ci].points.len());
        let (a, b) = d.curves[ci].segment(seg);
        let (a, b) = (a.clone(), b.clone());
        let dir = b.sub(&a);
        match kind {
            0 => {
                // R1: a curl inserted mid-segment
                let flip = rng.random_bool(0.5);
                let top = rng.random_bool(0.5);
                let mut s = q(1, 8);
                let mut placed = None;
                for _ in 0..8 {
                    let m = a.lerp(&b, &q(3, 8));
                    let mut pts = d.curves[ci].points.clone();
                    let k = kink(&m, &dir, &s, flip);
                    let at = seg + 1;
                    pts.splice(at..at, k);
                    let mut curves = d.curves.clone();
                    curves[ci] = Curve::new(d.curves[ci].name.clone(), pts);
                    if let Some(nd) = rebuild(&d, curves, |_| top) {
                        if nd.crossing_count() == d.crossing_count() + 1 {
                            placed = Some(nd);
                            break;
                        }
                    }
                    s *= q(1, 2);
                }
                let Some(nd) = placed else { continue };
                let w = nd.writhe() - d.writhe();
                let got = resolve(&nd).map_err(|e| e.to_string())?;
                if w.abs() != 1 || got != base.scale(&-LaurentScalar::h_pow(3 * w)) {
                    return Err(format!("R1 with writhe change {w} on\n{d}"));
                }
                done[0] += 1;
            }
            1 | 2 => {
                // R2: a small loop across one strand; R3: a small loop around a crossing
                let (center, want) = if kind == 1 {
                    (a.lerp(&b, &q(1, 2)), 2)
                } else {
                    if d.crossings.is_empty() {
                        continue;
                    }
                    let x = &d.crossings[rng.random_range(0..d.crossings.len())];
                    (x.point.clone(), 4)
                };
                let over = rng.random_bool(0.5);
                let mut s = q(1, 16);
                let mut placed = None;
                for _ in 0..8 {
                    let pts: Vec<Point> = [(-3, -2), (2, -3), (3, 2), (-2, 3)]
                        .iter()
                        .map(|&(x, y)| center.add(&Point::new(&s * q(x, 1), &s * q(y, 1))))
                        .collect();
                    let mut curves = d.curves.clone();
                    curves.push(Curve::new("extra", pts));
                    let new_idx = curves.len() - 1;
                    if let Some(nd) = rebuild(&d, curves, |r| (r.a.curve == new_idx) == over) {
                        if nd.crossing_count() == d.crossing_count() + want {
                            placed = Some(nd);
                            break;
                        }
                    }
                    s *= q(1, 2);
                }
                let Some(nd) = placed else { continue };
                if resolve(&nd).map_err(|e| e.to_string())? != base.scale(&-LaurentScalar::alpha()) {
                    return Err(format!("R{} on\n{d}", kind + 1));
                }
                done[kind] += 1;
            }
            _ => unreachable!(),
        }
    }
    Ok(done)
}


pub fn to_f64(v: &Q) -> f64 {
    v.numer().to_f64().unwrap() / v.denom().to_f64().unwrap()
}
