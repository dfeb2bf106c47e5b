use std::fmt;

use num_traits::Zero;

use super::geom::{dist2_point_segment, fmt_q, q, ray_letters, segment_contact, Contact, Point, Q};
use super::word::CurveClass;
use super::SkeinError;

/// An `n`-holed disk: holes centered at `(i, 0)` for `i = 1..=n`, radius 1/4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Board {
    pub n: usize,
}

impl Board {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn hole_center(&self, i: usize) -> Point {
        Point::ints(i as i64, 0)
    }

    pub fn hole_radius2() -> Q {
        q(1, 16)
    }

    /// Index of the first hole the closed segment `ab` meets, if any.
    pub fn segment_meets_hole(&self, a: &Point, b: &Point) -> Option<usize> {
        let r2 = Self::hole_radius2();
        (1..=self.n).find(|&i| dist2_point_segment(&self.hole_center(i), a, b) <= r2)
    }
}

/// A position on a curve: segment index and parameter in `(0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrandRef {
    pub curve: usize,
    pub seg: usize,
    pub t: Q,
}

impl StrandRef {
    fn param_key(&self) -> (usize, &Q) {
        (self.seg, &self.t)
    }
}

/// A transverse double point. `a` precedes `b` (by curve index, then by
/// parameter for self-crossings).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub point: Point,
    pub a: StrandRef,
    pub b: StrandRef,
    pub a_over: bool,
}

impl Crossing {
    pub fn over(&self) -> &StrandRef {
        if self.a_over {
            &self.a
        } else {
            &self.b
        }
    }

    pub fn under(&self) -> &StrandRef {
        if self.a_over {
            &self.b
        } else {
            &self.a
        }
    }

    pub fn is_self(&self) -> bool {
        self.a.curve == self.b.curve
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    pub name: String,
    pub points: Vec<Point>,
}

impl Curve {
    pub fn new(name: impl Into<String>, points: Vec<Point>) -> Self {
        Self { name: name.into(), points }
    }

    pub fn segment(&self, i: usize) -> (&Point, &Point) {
        let k = self.points.len();
        (&self.points[i], &self.points[(i + 1) % k])
    }

    pub fn direction(&self, i: usize) -> Point {
        let (a, b) = self.segment(i);
        b.sub(a)
    }

    /// The free homotopy class of the curve as drawn.
    pub fn class(&self, n: usize) -> CurveClass {
        let mut w = Vec::new();
        for i in 0..self.points.len() {
            let (a, b) = self.segment(i);
            ray_letters(a, b, n, &mut w);
        }
        CurveClass::from_word(&w)
    }
}

/// A validated link diagram on a board, with blackboard framing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    pub board: Board,
    pub curves: Vec<Curve>,
    /// Sorted by crossing point, lexicographically in `(x, y)`.
    pub crossings: Vec<Crossing>,
}

/// A crossing found during validation, before the over/under choice.
#[derive(Clone, Debug)]
pub struct RawCrossing {
    pub point: Point,
    pub a: StrandRef,
    pub b: StrandRef,
}

/// Source line numbers for error messages; zero when built in code.
#[derive(Clone, Debug, Default)]
struct Lines {
    curve: Vec<usize>,
    over: usize,
}

impl Lines {
    fn curve(&self, i: usize) -> usize {
        self.curve.get(i).copied().unwrap_or(0)
    }
}

fn geom_err(line: usize, msg: String) -> SkeinError {
    SkeinError::Diagram { line, msg }
}

/// Check every invariant except over/under data and list the crossings in
/// lexicographic order of their points.
fn find_crossings(board: &Board, curves: &[Curve], lines: &Lines) -> Result<Vec<RawCrossing>, SkeinError> {
    for (ci, c) in curves.iter().enumerate() {
        let line = lines.curve(ci);
        let k = c.points.len();
        if k < 3 {
            return Err(geom_err(line, format!("curve {} needs at least 3 vertices", c.name)));
        }
        for i in 0..k {
            let (a, b) = c.segment(i);
            if a == b {
                return Err(geom_err(line, format!("curve {} has a zero-length segment at {a}", c.name)));
            }
            if let Some(h) = board.segment_meets_hole(a, b) {
                return Err(geom_err(line, format!("curve meets hole {h}: curve {} segment {a}-{b}", c.name)));
            }
        }
    }
    let mut raw = Vec::new();
    for ci in 0..curves.len() {
        for cj in ci..curves.len() {
            let (c1, c2) = (&curves[ci], &curves[cj]);
            let (k1, k2) = (c1.points.len(), c2.points.len());
            for i in 0..k1 {
                let j0 = if ci == cj { i + 1 } else { 0 };
                for j in j0..k2 {
                    let (p, p2) = c1.segment(i);
                    let (r, r2) = c2.segment(j);
                    let adjacent = ci == cj && (j == i + 1 || (i == 0 && j == k1 - 1));
                    if adjacent {
                        // consecutive segments share a vertex; reject only folding back
                        let (d1, d2) = (p2.sub(p), r2.sub(r));
                        if d1.cross(&d2).is_zero() && d1.dot(&d2) < Q::zero() {
                            let v = if j == i + 1 { p2 } else { p };
                            return Err(geom_err(
                                lines.curve(ci),
                                format!("curve {} folds back on itself at {v}", c1.name),
                            ));
                        }
                        continue;
                    }
                    match segment_contact(p, p2, r, r2) {
                        Contact::None => {}
                        Contact::Touch(pt) => {
                            return Err(geom_err(
                                lines.curve(cj),
                                format!("non-transverse contact between curves {} and {} at {pt}", c1.name, c2.name),
                            ));
                        }
                        Contact::Cross(t, u, pt) => raw.push(RawCrossing {
                            point: pt,
                            a: StrandRef { curve: ci, seg: i, t },
                            b: StrandRef { curve: cj, seg: j, t: u },
                        }),
                    }
                }
            }
        }
    }
    raw.sort_by(|x, y| x.point.cmp(&y.point));
    for w in raw.windows(2) {
        if w[0].point == w[1].point {
            return Err(geom_err(lines.over, format!("triple point at {}", w[0].point)));
        }
    }
    Ok(raw)
}

impl Diagram {
    /// Validate curves and decide each crossing with `a_over`, which receives
    /// the crossing and returns whether strand `a` passes over.
    pub fn build(
        board: Board,
        curves: Vec<Curve>,
        mut a_over: impl FnMut(&RawCrossing) -> bool,
    ) -> Result<Self, SkeinError> {
        let raw = find_crossings(&board, &curves, &Lines::default())?;
        let crossings = raw
            .into_iter()
            .map(|r| {
                let over = a_over(&r);
                Crossing { point: r.point, a: r.a, b: r.b, a_over: over }
            })
            .collect();
        Ok(Self { board, curves, crossings })
    }

    /// Curves stacked by layer: a crossing between curves of different layers
    /// puts the higher layer over. Equal layers at a crossing are an error.
    pub fn layered(board: Board, curves: Vec<Curve>, layers: &[u32]) -> Result<Self, SkeinError> {
        let mut bad = None;
        let d = Self::build(board, curves, |r| {
            let (la, lb) = (layers[r.a.curve], layers[r.b.curve]);
            if la == lb {
                bad = Some(r.point.clone());
            }
            la > lb
        })?;
        match bad {
            Some(p) => Err(geom_err(0, format!("crossing within one layer at {p}"))),
            None => Ok(d),
        }
    }

    /// A diagram without crossings.
    pub fn crossingless(board: Board, curves: Vec<Curve>) -> Result<Self, SkeinError> {
        let d = Self::build(board, curves, |_| true)?;
        if let Some(c) = d.crossings.first() {
            return Err(geom_err(0, format!("unexpected crossing at {}", c.point)));
        }
        Ok(d)
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Writhe of the diagram with each curve oriented along its vertex order.
    pub fn writhe(&self) -> i64 {
        self.crossings
            .iter()
            .map(|c| {
                let dov = self.curves[c.over().curve].direction(c.over().seg);
                let dun = self.curves[c.under().curve].direction(c.under().seg);
                if dov.cross(&dun) > Q::zero() {
                    1
                } else {
                    -1
                }
            })
            .sum()
    }

    pub fn parse(text: &str) -> Result<Self, SkeinError> {
        let mut board = None;
        let mut curves: Vec<Curve> = Vec::new();
        let mut lines = Lines::default();
        let mut over: Option<Vec<String>> = None;
        for (idx, raw_line) in text.lines().enumerate() {
            let ln = idx + 1;
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |msg: String| SkeinError::Parse { line: ln, msg };
            if board.is_none() {
                let n = line
                    .strip_prefix("board")
                    .map(str::trim)
                    .and_then(|r| r.strip_prefix("holes="))
                    .ok_or_else(|| perr(format!("expected `board holes=<n>`, found `{line}`")))?;
                let n: usize = n.trim().parse().map_err(|_| perr(format!("bad hole count `{n}`")))?;
                board = Some(Board::new(n));
                continue;
            }
            if line == "untranscribed" {
                return Err(SkeinError::Untranscribed);
            }
            let (head, rest) =
                line.split_once(':').ok_or_else(|| perr("expected `curve <id> : ...` or `over : ...`".to_string()))?;
            let mut head = head.split_whitespace();
            match (head.next(), head.next(), head.next()) {
                (Some("curve"), Some(id), None) => {
                    if id.ends_with('+') || id.ends_with('-') {
                        return Err(perr(format!("curve id `{id}` may not end in `+` or `-`")));
                    }
                    if curves.iter().any(|c| c.name == id) {
                        return Err(perr(format!("duplicate curve id `{id}`")));
                    }
                    let points = parse_points(rest).map_err(perr)?;
                    curves.push(Curve::new(id, points));
                    lines.curve.push(ln);
                }
                (Some("over"), None, None) => {
                    if over.is_some() {
                        return Err(perr("duplicate `over` line".into()));
                    }
                    over = Some(rest.split_whitespace().map(String::from).collect());
                    lines.over = ln;
                }
                _ => return Err(perr(format!("unrecognized line `{line}`"))),
            }
        }
        let board = board.ok_or(SkeinError::Parse { line: 0, msg: "missing `board holes=<n>` line".into() })?;
        let raw = find_crossings(&board, &curves, &lines)?;
        let over = over.unwrap_or_default();
        if over.len() != raw.len() {
            return Err(geom_err(
                lines.over,
                format!("crossing count mismatch: {} crossings, {} over entries", raw.len(), over.len()),
            ));
        }
        let mut crossings = Vec::with_capacity(raw.len());
        for (r, tok) in raw.into_iter().zip(over) {
            let a_over = decode_over(&curves, &r, &tok)
                .map_err(|m| geom_err(lines.over, format!("crossing at {}: {m}", r.point)))?;
            crossings.push(Crossing { point: r.point, a: r.a, b: r.b, a_over });
        }
        Ok(Self { board, curves, crossings })
    }

    fn over_token(&self, c: &Crossing) -> String {
        let name = &self.curves[c.over().curve].name;
        if c.is_self() {
            // `a` has the lower parameter
            format!("{name}{}", if c.a_over { '-' } else { '+' })
        } else {
            name.clone()
        }
    }
}

fn decode_over(curves: &[Curve], r: &RawCrossing, tok: &str) -> Result<bool, String> {
    let (an, bn) = (&curves[r.a.curve].name, &curves[r.b.curve].name);
    if r.a.curve == r.b.curve {
        debug_assert!(r.a.param_key() < r.b.param_key());
        if tok == format!("{an}-") {
            Ok(true)
        } else if tok == format!("{an}+") {
            Ok(false)
        } else {
            Err(format!("self-crossing of `{an}` needs `{an}-` or `{an}+`, found `{tok}`"))
        }
    } else if tok == an {
        Ok(true)
    } else if tok == bn {
        Ok(false)
    } else {
        Err(format!("expected `{an}` or `{bn}`, found `{tok}`"))
    }
}

fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: num_bigint::BigInt = n.trim().parse().ok()?;
            let d: num_bigint::BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}

fn parse_points(s: &str) -> Result<Vec<Point>, String> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(|| format!("expected `(` at `{rest}`"))?;
        let (inner, after) = body.split_once(')').ok_or_else(|| format!("unclosed point at `{rest}`"))?;
        let (x, y) = inner.split_once(',').ok_or_else(|| format!("point `({inner})` needs two coordinates"))?;
        let x = parse_rational(x).ok_or_else(|| format!("bad coordinate `{x}`"))?;
        let y = parse_rational(y).ok_or_else(|| format!("bad coordinate `{y}`"))?;
        out.push(Point::new(x, y));
        rest = after.trim_start();
    }
    Ok(out)
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "board holes={}", self.board.n)?;
        for c in &self.curves {
            let pts: Vec<String> = c.points.iter().map(|p| format!("({},{})", fmt_q(&p.x), fmt_q(&p.y))).collect();
            writeln!(f, "curve {} : {}", c.name, pts.join(" "))?;
        }
        if !self.crossings.is_empty() {
            let toks: Vec<String> = self.crossings.iter().map(|c| self.over_token(c)).collect();
            writeln!(f, "over : {}", toks.join(" "))?;
        }
        Ok(())
    }
}

/// `p` mapped by `center + k (p - center)`.
pub fn scale_about(p: &Point, center: &Point, k: &Q) -> Point {
    center.add(&p.sub(center).scale(k))
}

/// Translate and uniformly scale a polyline given in a local frame.
pub fn place(local: &[(i64, i64)], origin: &Point, unit: &Q) -> Vec<Point> {
    local.iter().map(|&(x, y)| origin.add(&Point::ints(x, y).scale(unit))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(cx: i64, half: Q) -> Vec<Point> {
        let c = Point::ints(cx, 0);
        let h = half;
        let m = -h.clone();
        vec![
            c.add(&Point::new(m.clone(), m.clone())),
            c.add(&Point::new(h.clone(), m.clone())),
            c.add(&Point::new(h.clone(), h.clone())),
            c.add(&Point::new(m, h)),
        ]
    }

    #[test]
    fn square_around_hole_is_valid() {
        let text = "board holes=1\ncurve a : (1/2,-1/2) (3/2,-1/2) (3/2,1/2) (1/2,1/2)\n";
        let d = Diagram::parse(text).unwrap();
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.curves[0].class(1).to_string(), "1");
        assert_eq!(Diagram::parse(&d.to_string()).unwrap(), d);
    }

    #[test]
    fn loop_into_hole_rejected() {
        let text = "board holes=1\ncurve a : (1,-1/2) (2,-1/2) (2,1/2) (1,1/2)\n";
        let err = Diagram::parse(text).unwrap_err().to_string();
        assert!(err.contains("curve meets hole"), "{err}");
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn crossing_count_mismatch() {
        let text = "board holes=0\n\
                    curve a : (0,0) (4,0) (4,2) (0,2)\n\
                    curve b : (1,-1) (3,-1) (3,3) (1,3)\n\
                    over : a b a\n";
        let err = Diagram::parse(text).unwrap_err().to_string();
        assert!(err.contains("crossing count mismatch"), "{err}");
        let ok = text.replace("over : a b a", "over : a b a b");
        let d = Diagram::parse(&ok).unwrap();
        assert_eq!(d.crossing_count(), 4);
        assert_eq!(Diagram::parse(&d.to_string()).unwrap(), d);
    }

    #[test]
    fn touching_and_triple_points_rejected() {
        let touch = "board holes=0\ncurve a : (0,0) (2,0) (2,2) (0,2)\ncurve b : (2,1) (3,0) (3,2)\n";
        assert!(Diagram::parse(touch).unwrap_err().to_string().contains("non-transverse"));
        let triple = "board holes=0\n\
                      curve a : (-2,0) (2,0) (0,-3)\n\
                      curve b : (0,-1) (0,2) (1,2)\n\
                      curve c : (-1,-1) (1,1) (-1,1)\n";
        let err = Diagram::parse(triple).unwrap_err().to_string();
        assert!(err.contains("triple point at (0,0)"), "{err}");
    }

    #[test]
    fn self_crossing_tokens() {
        // figure-eight shaped curve with one self-crossing at the origin
        let text = "board holes=0\ncurve k : (-1,-1) (1,1) (1,-1) (-1,1)\nover : k-\n";
        let d = Diagram::parse(text).unwrap();
        assert_eq!(d.crossing_count(), 1);
        assert!(d.crossings[0].a_over);
        assert_eq!(Diagram::parse(&d.to_string()).unwrap(), d);
        let bad = text.replace("k-", "k");
        assert!(Diagram::parse(&bad).is_err());
    }

    #[test]
    fn layered_build() {
        let b = Board::new(2);
        let a = Curve::new("a", square(1, q(1, 2)));
        let mut pts = square(2, q(5, 8));
        pts.iter_mut().for_each(|p| p.y = &p.y + q(1, 7));
        let c = Curve::new("b", pts);
        let d = Diagram::layered(b, vec![a.clone(), c.clone()], &[1, 0]).unwrap();
        assert_eq!(d.crossing_count(), 2);
        assert!(d.crossings.iter().all(|x| x.over().curve == 0));
        assert!(Diagram::layered(b, vec![a, c], &[0, 0]).is_err());
    }
}
