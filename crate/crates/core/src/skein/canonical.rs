use super::diagram::{Board, Curve, Diagram};
use super::element::Multicurve;
use super::geom::{q, qi, Point, Q};
use super::SkeinError;

fn span(s: &[usize]) -> (usize, usize) {
    (s[0], s[s.len() - 1])
}

/// Whether all holes of `inner` lie strictly between two consecutive holes of `outer`.
fn inside_gap(inner: &[usize], outer: &[usize]) -> bool {
    let (lo, hi) = span(inner);
    outer.windows(2).any(|w| w[0] < lo && hi < w[1])
}

/// Band-below loops around disjoint hole sets can be drawn disjointly iff
/// their spans are disjoint or one sits inside a gap of the other.
fn compatible(a: &[usize], b: &[usize]) -> bool {
    let (al, ah) = span(a);
    let (bl, bh) = span(b);
    ah < bl || bh < al || inside_gap(a, b) || inside_gap(b, a)
}

/// Whether `m` has a crossingless drawing by [`canonical_diagram`].
pub fn has_canonical_diagram(m: &Multicurve) -> bool {
    sets_of(m).is_ok()
}

fn sets_of(m: &Multicurve) -> Result<Vec<Vec<usize>>, SkeinError> {
    let mut sets = Vec::with_capacity(m.len());
    for c in m.classes() {
        if !c.is_band_below() {
            return Err(SkeinError::NotCanonical(format!("component {c} is not a band-below loop")));
        }
        sets.push(c.enclosed());
    }
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            let disjoint = !sets[i].iter().any(|x| sets[j].contains(x));
            if disjoint && !compatible(&sets[i], &sets[j]) {
                return Err(SkeinError::NotCanonical(format!(
                    "band-below loops around {:?} and {:?} must cross",
                    sets[i], sets[j]
                )));
            }
        }
    }
    Ok(sets)
}

/// A crossingless drawing of a multicurve of band-below loops.
///
/// Each component around `i_1 < ... < i_k` is a comb: a horizontal band at
/// negative height from `i_1` to `i_k` with a tooth rising around each hole.
/// Tooth half-widths shrink with containment depth and stay in `(1/4, 1/2)`.
/// A parent's band strip contains its children's strips, and siblings are
/// stacked with shorter spans on top, so a loop lying in a gap of another is
/// drawn above it. Along a chain of parallel copies the geometry depends
/// on depth alone, so two such chains overlay without crossings.
pub fn canonical_diagram(m: &Multicurve, board: Board) -> Result<Diagram, SkeinError> {
    if m.max_hole() > board.n {
        return Err(SkeinError::NotCanonical(format!("{m} needs more than {} holes", board.n)));
    }
    let sets = sets_of(m)?;
    let k = sets.len();
    // containment forest; duplicates nest in index order
    let contains = |i: usize, j: usize| -> bool {
        let sub = sets[j].iter().all(|x| sets[i].contains(x));
        sub && (sets[i].len() > sets[j].len() || i < j)
    };
    let parent: Vec<Option<usize>> = (0..k)
        .map(|j| {
            (0..k)
                .filter(|&i| i != j && contains(i, j))
                .min_by_key(|&i| (sets[i].len(), std::cmp::Reverse(i)))
        })
        .collect();
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut roots = Vec::new();
    for j in 0..k {
        match parent[j] {
            Some(p) => children[p].push(j),
            None => roots.push(j),
        }
    }
    let order_key = |i: &usize| {
        let (lo, hi) = span(&sets[*i]);
        (hi - lo, sets[*i].clone(), *i)
    };
    roots.sort_by_key(order_key);
    for c in children.iter_mut() {
        c.sort_by_key(order_key);
    }
    // each node gets a band strip [lo, hi]; its children are stacked inside a
    // margin, shorter spans on top, in alternate slots of that range
    let mut strip: Vec<(Q, Q)> = vec![(q(0, 1), q(0, 1)); k];
    let mut depth = vec![0usize; k];
    let mut stack: Vec<(Vec<usize>, Q, Q, usize)> = vec![(roots, q(-1, 1), q(-1, 2), 0)];
    while let Some((kids, lo, hi, d)) = stack.pop() {
        let slots = 2 * kids.len() as i64 - 1;
        let step = (&hi - &lo) / qi(slots.max(1));
        for (j, &c) in kids.iter().enumerate() {
            let top = &hi - &step * qi(2 * j as i64);
            let bot = &top - &step;
            depth[c] = d;
            let m = q(1, 16 * (d as i64 + 2) * (d as i64 + 3));
            stack.push((children[c].clone(), &bot + &m, &top - &m, d + 1));
            strip[c] = (bot, top);
        }
    }
    let mut curves = Vec::with_capacity(k);
    for (idx, s) in sets.iter().enumerate() {
        let w = q(1, 4) + q(1, 4 * (depth[idx] as i64 + 2));
        let (y_bot, y_top) = &strip[idx];
        curves.push(Curve::new(format!("c{}", idx + 1), comb(s, &w, y_top, y_bot)));
    }
    Diagram::crossingless(board, curves)
}

fn comb(s: &[usize], w: &Q, y_top: &Q, y_bot: &Q) -> Vec<Point> {
    let x = |i: usize| qi(i as i64);
    let (first, last) = span(s);
    let mut pts = vec![Point::new(x(first) - w, y_bot.clone()), Point::new(x(last) + w, y_bot.clone())];
    for (j, &i) in s.iter().enumerate().rev() {
        pts.push(Point::new(x(i) + w, if j + 1 == s.len() { w.clone() } else { y_top.clone() }));
        if j + 1 < s.len() {
            pts.push(Point::new(x(i) + w, w.clone()));
        }
        pts.push(Point::new(x(i) - w, w.clone()));
        if j > 0 {
            pts.push(Point::new(x(i) - w, y_top.clone()));
        }
    }
    pts
}
