//! Chebyshev families in a central variable `x` over `Z[q^{+-1/2}]`.
//!
//! `gamma(n)` is the shifted second-kind family (`gamma(1) = 1`,
//! `gamma(2) = x`), extended backwards by `gamma(0) = 0`. `theta(n)` is the
//! first-kind family with `theta(0) = 2`, `theta(1) = x`. Both are memoized
//! in process-wide tables guarded by a read-write lock.

use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;

use crate::ring::{var_list, CPoly, LaurentScalar, RingError};

type L = LaurentScalar;

/// The variable list `[x]` shared by all single-variable Chebyshev values.
pub fn x_vars() -> Arc<[String]> {
    static VARS: OnceLock<Arc<[String]>> = OnceLock::new();
    VARS.get_or_init(|| var_list(&["x"])).clone()
}

/// The variable list `[x, r]`, where `r` stands for `r_1 + r_2`.
pub fn xr_vars() -> Arc<[String]> {
    static VARS: OnceLock<Arc<[String]>> = OnceLock::new();
    VARS.get_or_init(|| var_list(&["x", "r"])).clone()
}

struct Table {
    values: RwLock<Vec<CPoly>>,
    seed: fn() -> Vec<CPoly>,
}

impl Table {
    fn get(&self, n: usize) -> CPoly {
        if let Some(p) = self.values.read().expect("poisoned").get(n) {
            return p.clone();
        }
        let mut vals = self.values.write().expect("poisoned");
        if vals.is_empty() {
            *vals = (self.seed)();
        }
        let x = CPoly::var(&x_vars(), 0);
        while vals.len() <= n {
            let k = vals.len();
            let next = &(&x * &vals[k - 1]) - &vals[k - 2];
            vals.push(next);
        }
        vals[n].clone()
    }
}

fn gamma_table() -> &'static Table {
    static T: OnceLock<Table> = OnceLock::new();
    T.get_or_init(|| Table {
        values: RwLock::new(Vec::new()),
        seed: || {
            let v = x_vars();
            vec![CPoly::zero(&v), CPoly::one(&v)]
        },
    })
}

fn theta_table() -> &'static Table {
    static T: OnceLock<Table> = OnceLock::new();
    T.get_or_init(|| Table {
        values: RwLock::new(Vec::new()),
        seed: || {
            let v = x_vars();
            vec![CPoly::constant(&v, L::from_int(2)), CPoly::var(&v, 0)]
        },
    })
}

pub fn gamma(n: usize) -> CPoly {
    gamma_table().get(n)
}

pub fn theta(n: usize) -> CPoly {
    theta_table().get(n)
}

/// `gamma(n - 1)` for `n >= 0`, with `gamma(-1) = -1` from the backward recursion.
pub fn gamma_prev(n: usize) -> CPoly {
    match n {
        0 => -gamma(1),
        _ => gamma(n - 1),
    }
}

fn c(s: L) -> CPoly {
    CPoly::constant(&x_vars(), s)
}

/// The defining finite sum of `phi_n`; empty (zero) for `n <= 1`.
pub fn phi_sum(n: usize) -> CPoly {
    let mut acc = CPoly::zero(&x_vars());
    for j in 0..(n / 2) {
        let k = n - 1 - 2 * j;
        acc = &acc + &gamma(k).scale(&L::q_diff(k as i64));
    }
    acc
}

/// `x^2 - alpha^2`.
pub fn x2_minus_alpha2() -> CPoly {
    let x = CPoly::var(&x_vars(), 0);
    &(&x * &x) - &c(L::alpha() * L::alpha())
}

/// `phi_n` through the closed form with denominator `x^2 - alpha^2`.
/// Errors if the division leaves a remainder.
pub fn phi_closed(n: usize) -> Result<CPoly, RingError> {
    let k = n as i64;
    let num = &gamma(n + 1).scale(&L::q_diff(k - 1)) - &gamma_prev(n).scale(&L::q_diff(k + 1));
    num.divide_exact(&x2_minus_alpha2())
}

/// `q^{2n} gamma_{n+1} - q^{-2n} gamma_{n-1}`.
pub fn delta(n: usize) -> CPoly {
    assert!(n >= 1, "delta is defined for n >= 1");
    let k = n as i64;
    &gamma(n + 1).scale(&L::q_pow(2 * k)) - &gamma(n - 1).scale(&L::q_pow(-2 * k))
}

/// Re-express a polynomial in `[x]` over the variable list `[x, r]`.
pub fn lift_x_to_xr(p: &CPoly) -> CPoly {
    let vars = xr_vars();
    let mut out = CPoly::zero(&vars);
    for (m, c) in p.terms() {
        out = &out + &CPoly::term(&vars, vec![m.exps()[0], 0], c.clone());
    }
    out
}

/// `q^n gamma_n + sum_{j=1}^{n-1} (q^j - q^{-j}) gamma_j`.
pub fn kappa_r_coefficient(n: usize) -> CPoly {
    let mut acc = gamma(n).scale(&L::q_pow(n as i64));
    for j in 1..n {
        acc = &acc + &gamma(j).scale(&L::q_diff(j as i64));
    }
    acc
}

/// `kappa_n` in the variables `[x, r]`.
pub fn kappa(n: usize) -> CPoly {
    assert!(n >= 1, "kappa is defined for n >= 1");
    let vars = xr_vars();
    let k = n as i64;
    let r = CPoly::var(&vars, 1);
    let rest = &gamma(n + 1).scale(&L::q_pow(k)) + &gamma(n - 1).scale(&L::q_pow(-k));
    &(&lift_x_to_xr(&kappa_r_coefficient(n)) * &r) - &lift_x_to_xr(&rest)
}

/// Evaluate a polynomial in `[x]` at `q^{1/2} = -1`.
pub fn eval_classical(p: &CPoly, x: Complex64) -> Complex64 {
    p.eval_classical(&[x])
}

/// Numerically evaluate `gamma_n(x)` by the three-term recursion.
pub fn gamma_numeric(n: usize, x: Complex64) -> Complex64 {
    let (mut prev, mut cur) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// One row of an identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityRow {
    pub identity: &'static str,
    pub n: usize,
    pub pass: bool,
    pub detail: Option<String>,
}

fn row(identity: &'static str, n: usize, lhs: &CPoly, rhs: &CPoly) -> IdentityRow {
    let detail = lhs
        .first_difference(rhs)
        .map(|(m, a, b)| format!("first difference at x-degree {:?}: {a} vs {b}", m.exps()));
    IdentityRow { identity, n, pass: detail.is_none(), detail }
}

/// Every polynomial identity of the Chebyshev layer, each for all
/// applicable `n <= max_n`.
pub fn verify_identities(max_n: usize) -> Vec<IdentityRow> {
    let mut rows = Vec::new();
    for n in 1..=max_n {
        rows.push(row("theta=gamma_next-gamma_prev", n, &theta(n), &(&gamma(n + 1) - &gamma(n - 1))));
    }
    for n in 4..=max_n {
        let x = CPoly::var(&x_vars(), 0);
        let rhs = &(&(&(&x * &x) - &c(L::from_int(2))) * &gamma(n - 1)) - &gamma(n - 3);
        rows.push(row("gamma_two_step", n, &gamma(n + 1), &rhs));
    }
    for n in 1..=max_n {
        match phi_closed(n) {
            Ok(p) => rows.push(row("phi_closed=phi_sum", n, &p, &phi_sum(n))),
            Err(e) => rows.push(IdentityRow {
                identity: "phi_closed=phi_sum",
                n,
                pass: false,
                detail: Some(e.to_string()),
            }),
        }
    }
    for n in 1..=max_n {
        let k = n as i64;
        let lhs = &theta(n) - &delta(n);
        let inner = &gamma(n + 1).scale(&-L::q_pow(k)) - &gamma(n - 1).scale(&L::q_pow(-k));
        rows.push(row("theta-delta_factor", n, &lhs, &inner.scale(&L::q_diff(k))));
    }
    for n in 2..=max_n {
        let qn_gamma = gamma(n).scale(&L::q_pow(n as i64));
        let lhs = &(&qn_gamma + &phi_sum(n - 1)) + &phi_sum(n);
        rows.push(row("psi_collapse", n, &lhs, &kappa_r_coefficient(n)));
    }
    for n in 1..=max_n {
        let vars = xr_vars();
        let r_minus_x = &CPoly::var(&vars, 1) - &CPoly::var(&vars, 0);
        let rhs = &r_minus_x * &lift_x_to_xr(&gamma(n));
        rows.push(row("kappa_classical", n, &kappa(n).specialize_classical(), &rhs));
    }
    if max_n >= 1 {
        let vars = xr_vars();
        let rhs = (&CPoly::var(&vars, 1) - &CPoly::var(&vars, 0)).scale(&L::q());
        rows.push(row("kappa_1", 1, &kappa(1), &rhs));
    }
    rows
}
