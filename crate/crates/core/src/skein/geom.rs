use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// A point with exact rational coordinates; ordered lexicographically by `(x, y)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Q,
    pub y: Q,
}

impl Point {
    pub fn new(x: Q, y: Q) -> Self {
        Self { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Self::new(qi(x), qi(y))
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn add(&self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn scale(&self, k: &Q) -> Point {
        Point::new(&self.x * k, &self.y * k)
    }

    /// `self + t (o - self)`.
    pub fn lerp(&self, o: &Point, t: &Q) -> Point {
        self.add(&o.sub(self).scale(t))
    }

    pub fn dot(&self, o: &Point) -> Q {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn cross(&self, o: &Point) -> Q {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn norm2(&self) -> Q {
        self.dot(self)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.x), to_f64(&self.y))
    }
}

pub fn to_f64(v: &Q) -> f64 {
    let n: f64 = v.numer().to_string().parse().unwrap_or(f64::NAN);
    let d: f64 = v.denom().to_string().parse().unwrap_or(f64::NAN);
    n / d
}

pub fn fmt_q(v: &Q) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", fmt_q(&self.x), fmt_q(&self.y))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Squared distance from `c` to the closed segment `ab`.
pub fn dist2_point_segment(c: &Point, a: &Point, b: &Point) -> Q {
    let ab = b.sub(a);
    let len2 = ab.norm2();
    if len2.is_zero() {
        return c.sub(a).norm2();
    }
    let mut t = c.sub(a).dot(&ab) / &len2;
    if t.is_negative() {
        t = Q::zero();
    } else if t > Q::one() {
        t = Q::one();
    }
    c.sub(&a.lerp(b, &t)).norm2()
}

/// How two segments meet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Contact {
    None,
    /// Transverse crossing at interior parameters `(t, u)`.
    Cross(Q, Q, Point),
    /// Any other contact: touching at an endpoint or collinear overlap.
    Touch(Point),
}

/// Intersection of segments `p + t (p2 - p)` and `r + u (r2 - r)`.
pub fn segment_contact(p: &Point, p2: &Point, r: &Point, r2: &Point) -> Contact {
    let d1 = p2.sub(p);
    let d2 = r2.sub(r);
    let denom = d1.cross(&d2);
    let w = r.sub(p);
    if denom.is_zero() {
        if !w.cross(&d1).is_zero() {
            return Contact::None;
        }
        // collinear: compare projections onto d1
        let len2 = d1.norm2();
        let a = w.dot(&d1) / &len2;
        let b = r2.sub(p).dot(&d1) / &len2;
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        if hi < Q::zero() || lo > Q::one() {
            return Contact::None;
        }
        let t = if lo > Q::zero() { lo } else { Q::zero() };
        return Contact::Touch(p.lerp(p2, &t));
    }
    let t = w.cross(&d2) / &denom;
    let u = w.cross(&d1) / &denom;
    let zero = Q::zero();
    let one = Q::one();
    if t < zero || t > one || u < zero || u > one {
        return Contact::None;
    }
    let pt = p.lerp(p2, &t);
    if t == zero || t == one || u == zero || u == one {
        return Contact::Touch(pt);
    }
    Contact::Cross(t, u, pt)
}

/// Letters read off the upward cut rays `x = i, y > 0` (`i = 1..=n`) along
/// the segment `p -> q`, in order. A point with `x = i` counts as right of
/// the ray. Moving rightwards across ray `i` gives `+i`, leftwards `-i`.
pub fn ray_letters(p: &Point, q: &Point, n: usize, out: &mut Vec<i32>) {
    if p.x == q.x {
        return;
    }
    let right = p.x < q.x;
    let mut hits: Vec<i64> = Vec::new();
    for i in 1..=n as i64 {
        let xi = qi(i);
        let side_p = p.x < xi;
        let side_q = q.x < xi;
        if side_p == side_q {
            continue;
        }
        let y = &p.y + (&xi - &p.x) * (&q.y - &p.y) / (&q.x - &p.x);
        if y.is_positive() {
            hits.push(i);
        }
    }
    if !right {
        hits.reverse();
    }
    out.extend(hits.into_iter().map(|i| if right { i as i32 } else { -(i as i32) }));
}
