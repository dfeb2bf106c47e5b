use nalgebra::DMatrix;
use num_integer::Integer;

use super::mat::{commutator_trace, C, Mat2C};
use super::traces::{check_meridian_trace, eigenvalue};
use super::ChvarError;

/// A univariate polynomial with complex coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyC(pub Vec<C>);

impl PolyC {
    pub fn constant(c: C) -> Self {
        PolyC(vec![c])
    }

    pub fn linear(c0: C, c1: C) -> Self {
        PolyC(vec![c0, c1])
    }

    pub fn eval(&self, s: C) -> C {
        self.0.iter().rev().fold(C::new(0.0, 0.0), |acc, c| acc * s + c)
    }

    pub fn derivative(&self) -> PolyC {
        PolyC(self.0.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect())
    }

    fn scale_norm(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drop leading coefficients that are negligible relative to the largest.
    pub fn trimmed(&self) -> PolyC {
        let tol = 1e-11 * self.scale_norm().max(1e-300);
        let mut v = self.0.clone();
        while v.len() > 1 && v.last().is_some_and(|c| c.norm() <= tol) {
            v.pop();
        }
        PolyC(v)
    }

    pub fn degree(&self) -> usize {
        self.trimmed().0.len().saturating_sub(1)
    }

    pub fn is_negligible(&self) -> bool {
        self.scale_norm() < 1e-12
    }

    pub fn add(&self, o: &PolyC) -> PolyC {
        let n = self.0.len().max(o.0.len());
        let z = C::new(0.0, 0.0);
        PolyC((0..n).map(|i| self.0.get(i).copied().unwrap_or(z) + o.0.get(i).copied().unwrap_or(z)).collect())
    }

    pub fn sub(&self, o: &PolyC) -> PolyC {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> PolyC {
        PolyC(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, o: &PolyC) -> PolyC {
        let mut out = vec![C::new(0.0, 0.0); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyC(out)
    }

    /// All complex roots, from the eigenvalues of the companion matrix and
    /// one Newton polish step each.
    pub fn roots(&self) -> Vec<C> {
        let p = self.trimmed();
        let d = p.0.len() - 1;
        if d == 0 {
            return Vec::new();
        }
        let lead = p.0[d];
        let mut comp = DMatrix::<C>::zeros(d, d);
        for i in 1..d {
            comp[(i, i - 1)] = C::new(1.0, 0.0);
        }
        for i in 0..d {
            comp[(i, d - 1)] = -p.0[i] / lead;
        }
        let eig = comp.schur().eigenvalues().map(|v| v.iter().copied().collect::<Vec<_>>()).unwrap_or_default();
        let dp = p.derivative();
        eig.into_iter()
            .map(|z| {
                let dz = dp.eval(z);
                if dz.norm() > 1e-14 {
                    let step = p.eval(z) / dz;
                    if step.norm() < 1e-3 * (1.0 + z.norm()) {
                        return z - step;
                    }
                }
                z
            })
            .collect()
    }
}

type PMat = [[PolyC; 2]; 2];

fn pmul(a: &PMat, b: &PMat) -> PMat {
    let f = |i: usize, j: usize| a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]));
    [[f(0, 0), f(0, 1)], [f(1, 0), f(1, 1)]]
}

fn pconst(m: &Mat2C) -> PMat {
    let k = |i, j| PolyC::constant(m[(i, j)]);
    [[k(0, 0), k(0, 1)], [k(1, 0), k(1, 1)]]
}

fn pidentity() -> PMat {
    pconst(&Mat2C::identity())
}

/// `g^-1 = t e - g` for a trace-`t` element.
fn pinverse(g: &PMat, t: C) -> PMat {
    let tt = PolyC::constant(t);
    [[tt.sub(&g[0][0]), g[0][1].neg()], [g[1][0].neg(), tt.sub(&g[1][1])]]
}

/// The generator pair `(u, v(s))` with `u` diagonal and `tr(u v) = s`.
fn generator_pair(t: C) -> (PMat, PMat) {
    let l = eigenvalue(t);
    let li = 1.0 / l;
    let u = pconst(&Mat2C::new(l, C::new(0.0, 0.0), C::new(0.0, 0.0), li));
    // p(s) = (s - t / l) / (l - 1 / l), r(s) = p (t - p) - 1
    let den = l - li;
    let p = PolyC::linear(-t * li / den, 1.0 / den);
    let tp = PolyC::constant(t).sub(&p);
    let r = p.mul(&tp).sub(&PolyC::constant(C::new(1.0, 0.0)));
    let v = [[p, PolyC::constant(C::new(1.0, 0.0))], [r, tp]];
    (u, v)
}

/// Exponent signs `(-1)^{floor(i a / b)}` for `i = 1 .. b-1`. For odd `b`
/// an even `a` is first replaced by `a + b`, which gives the same knot and a
/// palindromic sign sequence.
pub fn bridge_signs(a: i64, b: i64) -> Vec<i32> {
    let a = if b % 2 == 1 && a % 2 == 0 { a + b } else { a };
    (1..b).map(|i| if Integer::div_floor(&(i * a), &b).rem_euclid(2) == 0 { 1 } else { -1 }).collect()
}

/// The relator matrix `W u - v W` (odd `b`) or `W v - v W` (even `b`) as a
/// polynomial in `s = tr(u v)`, with `W` alternating in `u`, `v` starting at `u`.
pub fn relator_polynomials(a: i64, b: i64, t: C) -> [PolyC; 4] {
    let (u, v) = generator_pair(t);
    let (ui, vi) = (pinverse(&u, t), pinverse(&v, t));
    let mut w = pidentity();
    for (k, e) in bridge_signs(a, b).into_iter().enumerate() {
        let g = match (k % 2 == 0, e > 0) {
            (true, true) => &u,
            (true, false) => &ui,
            (false, true) => &v,
            (false, false) => &vi,
        };
        w = pmul(&w, g);
    }
    let (lhs, rhs) = if b % 2 == 1 { (pmul(&w, &u), pmul(&v, &w)) } else { (pmul(&w, &v), pmul(&v, &w)) };
    [lhs[0][0].sub(&rhs[0][0]), lhs[0][1].sub(&rhs[0][1]), lhs[1][0].sub(&rhs[1][0]), lhs[1][1].sub(&rhs[1][1])]
}

/// An irreducible representation of a 2-bridge link group, given on the two
/// bridge meridians.
#[derive(Clone, Debug)]
pub struct BridgeRep {
    pub s: C,
    pub u: Mat2C,
    pub v: Mat2C,
}

fn eval_pair(t: C, s: C) -> (Mat2C, Mat2C) {
    let (u, v) = generator_pair(t);
    let ev = |m: &PMat| Mat2C::new(m[0][0].eval(s), m[0][1].eval(s), m[1][0].eval(s), m[1][1].eval(s));
    (ev(&u), ev(&v))
}

/// All irreducible representations of `B(a/b)` sending the meridians to
/// trace-`t` elements, sorted by `s`.
pub fn bridge_representation(a: i64, b: i64, t: C) -> Result<Vec<BridgeRep>, ChvarError> {
    if b <= 2 {
        return Err(ChvarError::Bridge(format!("denominator {b} must exceed 2")));
    }
    if a.gcd(&b) != 1 {
        return Err(ChvarError::Bridge(format!("{a}/{b} is not in lowest terms")));
    }
    check_meridian_trace(t)?;
    let entries = relator_polynomials(a, b, t);
    let nonzero: Vec<&PolyC> = entries.iter().filter(|p| !p.is_negligible()).collect();
    let Some(driver) = nonzero.iter().filter(|p| p.degree() >= 1).min_by_key(|p| p.degree()) else {
        return Err(ChvarError::Bridge("relator has no s-dependence".into()));
    };
    let scale = nonzero.iter().map(|p| p.scale_norm()).fold(1.0, f64::max);
    let mut out: Vec<BridgeRep> = Vec::new();
    for s in driver.roots() {
        if nonzero.iter().any(|p| p.eval(s).norm() > 1e-7 * scale * (1.0 + s.norm()).powi(p.degree() as i32)) {
            continue;
        }
        if (s - 2.0).norm() < 1e-6 || (s - (t * t - 2.0)).norm() < 1e-6 {
            continue;
        }
        let (u, v) = eval_pair(t, s);
        if (commutator_trace(&u, &v) - 2.0).norm() < 1e-6 {
            continue;
        }
        if out.iter().any(|r| (r.s - s).norm() < 1e-7) {
            continue;
        }
        out.push(BridgeRep { s, u, v });
    }
    if out.is_empty() {
        return Err(ChvarError::NonGeneric(format!("no irreducible representation of B({a}/{b}) at t = {t}; retry")));
    }
    out.sort_by(|x, y| x.s.re.total_cmp(&y.s.re).then(x.s.im.total_cmp(&y.s.im)));
    Ok(out)
}
