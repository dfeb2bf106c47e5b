use std::sync::Arc;

use crate::cheby::{delta, gamma, kappa, phi_sum, theta, x2_minus_alpha2};
use crate::ring::{var_list, CPoly, LaurentScalar};

use super::algebra::{collar_algebra, exterior_algebra, NcAlgebraSpec, NcElement, Word};
use super::NcError;

type L = LaurentScalar;

/// Which independent check of the commutation identity to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Clear the denominator `alpha^2 - x^2` and compare in `Z[q^{+-1/2}][x, c, c']`.
    Commutative,
    /// Normalize both sides in the collar algebra.
    Rewriting,
    Both,
}

/// Deliberate corruptions used to check that the verifier can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    None,
    /// Replace `q^{-2n}` by `q^{2n}` in the coefficient of the `l1` term.
    EllCoefficient,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
}

impl Outcome {
    pub fn passed(&self) -> bool {
        matches!(self, Outcome::Pass)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Pass => "PASS",
            Outcome::Fail(_) => "FAIL",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CommuteManyReport {
    pub n: usize,
    pub commutative: Option<Outcome>,
    pub rewriting: Option<Outcome>,
}

impl CommuteManyReport {
    pub fn passed(&self) -> bool {
        self.commutative.iter().chain(self.rewriting.iter()).all(Outcome::passed)
    }
}

/// The right-hand data of `t1 * Delta = theta_n(x) t1 + E l1 gamma_n(x) + s (P c + phi_n c')`.
struct Identity {
    theta: CPoly,
    delta: CPoly,
    gamma: CPoly,
    ell: L,
    scale: L,
    p_c: CPoly,
    p_cp: CPoly,
}

fn identity(n: usize, mutation: Mutation) -> Identity {
    let k = n as i64;
    let other = match mutation {
        Mutation::None => L::q_pow(-2 * k),
        Mutation::EllCoefficient => L::q_pow(2 * k),
    };
    Identity {
        theta: theta(n),
        delta: delta(n),
        gamma: gamma(n),
        ell: L::q() * (L::q_pow(2 * k) - other),
        scale: L::q_diff(k),
        p_c: &gamma(n).scale(&L::q_pow(k)) + &phi_sum(n - 1),
        p_cp: phi_sum(n),
    }
}

fn lift(p: &CPoly, vars: &Arc<[String]>) -> CPoly {
    let mut out = CPoly::zero(vars);
    for (m, c) in p.terms() {
        let mut e = vec![0; vars.len()];
        e[0] = m.exps()[0];
        out = &out + &CPoly::term(vars, e, c.clone());
    }
    out
}

fn check_commutative(id: &Identity) -> Outcome {
    let vars = var_list(&["x", "c", "cp"]);
    let (x, c, cp) = (CPoly::var(&vars, 0), CPoly::var(&vars, 1), CPoly::var(&vars, 2));
    let alpha = L::alpha();
    let f = &(&c * &x) + &cp.scale(&alpha);
    let g = &(&cp * &x) + &c.scale(&alpha);
    let lhs = &(&lift(&(&id.theta - &id.delta), &vars) * &f) + &(&lift(&id.gamma, &vars) * &g).scale(&id.ell);
    let psi = &(&lift(&id.p_c, &vars) * &c) + &(&lift(&id.p_cp, &vars) * &cp);
    let rhs = (&psi * &lift(&x2_minus_alpha2(), &vars)).scale(&-id.scale.clone());
    match lhs.first_difference(&rhs) {
        None => Outcome::Pass,
        Some((m, a, b)) => Outcome::Fail(format!("monomial x^{} c^{} c'^{}: {a} vs {b}", m.exps()[0], m.exps()[1], m.exps()[2])),
    }
}

fn check_rewriting(spec: &Arc<NcAlgebraSpec>, id: &Identity) -> Result<Outcome, NcError> {
    let g = |name: &str| NcElement::gen(spec, name);
    let poly = |p: &CPoly| NcElement::from_cpoly(spec, p);
    let (t1, l1, c, cp) = (g("t1")?, g("l1")?, g("c")?, g("cp")?);
    let lhs = &t1 * &poly(&id.delta)?;
    let psi = &(&poly(&id.p_c)? * &c) + &(&poly(&id.p_cp)? * &cp);
    let rhs = &(&(&poly(&id.theta)? * &t1) + &(&l1 * &poly(&id.gamma)?).scale(&id.ell)) + &psi.scale(&id.scale);
    Ok(match lhs.first_difference(&rhs) {
        None => Outcome::Pass,
        Some((w, a, b)) => Outcome::Fail(format!("word {w}: {a} vs {b}")),
    })
}

/// Check the commutation identity for `t1` past `Delta(x)` at a single `n >= 1`.
pub fn verify_commute_many(n: usize, route: Route, mutation: Mutation) -> Result<CommuteManyReport, NcError> {
    if n == 0 {
        return Err(NcError::OutOfRange(n));
    }
    let id = identity(n, mutation);
    let commutative = matches!(route, Route::Commutative | Route::Both).then(|| check_commutative(&id));
    let rewriting = match route {
        Route::Rewriting | Route::Both => Some(check_rewriting(&collar_algebra(), &id)?),
        Route::Commutative => None,
    };
    Ok(CommuteManyReport { n, commutative, rewriting })
}

#[derive(Clone, Debug)]
pub struct DeriveReport {
    pub n: usize,
    /// The torsion element obtained by dividing the residual by `q (q^n - q^-n)`.
    pub e_n: NcElement,
    pub outcome: Outcome,
}

fn x_power_terms(p: &CPoly) -> Vec<(u32, L)> {
    p.terms().map(|(m, c)| (m.exps()[0], c.clone())).collect()
}

/// The torsion element `alpha w (q^-1 kappa_n(x, r) t + (q^n + q^-n) l1 gamma_n(x))`
/// in the exterior algebra, with `w` standing for `u_3 - l_3`.
pub fn e_n_formula(n: usize, spec: &Arc<NcAlgebraSpec>) -> Result<NcElement, NcError> {
    if n == 0 {
        return Err(NcError::OutOfRange(n));
    }
    let k = n as i64;
    let (w, t, l1) = (spec.index("w")?, spec.index("t")?, spec.index("l1")?);
    let (x, r) = (spec.index("x")?, spec.index("r")?);
    let mut raw = Vec::new();
    for (m, c) in kappa(n).terms() {
        let mut word = vec![w];
        word.extend(std::iter::repeat_n(x, m.exps()[0] as usize));
        word.extend(std::iter::repeat_n(r, m.exps()[1] as usize));
        word.push(t);
        raw.push((Word(word), L::alpha() * L::qbar() * c));
    }
    for (e, c) in x_power_terms(&gamma(n)) {
        let mut word = vec![w, l1];
        word.extend(std::iter::repeat_n(x, e as usize));
        raw.push((Word(word), L::alpha() * L::q_sum(k) * c));
    }
    Ok(NcElement::normalize(spec, raw))
}

/// Assemble the residual of the exterior relation after pushing `t1` past
/// `Delta(x)`, specialize the collar generators (`t1 -> t`, `c, c' -> t r`),
/// and divide out `q (q^n - q^-n)`.
///
/// Polynomials in `x` are kept to the left of `t` throughout; the residual
/// is a formal expression in the free letters, not a normal form of the
/// collar algebra, so the specialization does not have to respect its rules.
pub fn derive_e_n(n: usize) -> Result<DeriveReport, NcError> {
    if n == 0 {
        return Err(NcError::OutOfRange(n));
    }
    let spec = exterior_algebra(false);
    let id = identity(n, Mutation::None);
    let (w, t, l1) = (spec.index("w")?, spec.index("t")?, spec.index("l1")?);
    let (x, r) = (spec.index("x")?, spec.index("r")?);
    let alpha = L::alpha();
    let xs = |e: u32| std::iter::repeat_n(x, e as usize);

    let mut raw: Vec<(Word, L)> = Vec::new();
    // (theta_n - Delta)(x) t1 with t1 -> t
    for (e, c) in x_power_terms(&(&id.theta - &id.delta)) {
        let word = std::iter::once(w).chain(xs(e)).chain([t]).collect();
        raw.push((Word(word), &alpha * &c));
    }
    // (q^n - q^-n)(P(x) c + phi_n(x) c') with c, c' -> t r
    for (e, c) in x_power_terms(&(&id.p_c + &id.p_cp)) {
        let word = std::iter::once(w).chain(xs(e)).chain([t, r]).collect();
        raw.push((Word(word), &alpha * &id.scale * &c));
    }
    // E l1 gamma_n(x)
    for (e, c) in x_power_terms(&id.gamma) {
        let word = [w, l1].into_iter().chain(xs(e)).collect();
        raw.push((Word(word), &alpha * &id.ell * &c));
    }
    let residual = NcElement::normalize(&spec, raw);
    let unit = L::q() * L::q_diff(n as i64);
    let expected = e_n_formula(n, &spec)?;
    let Some(e_n) = residual.div_scalar_exact(&unit) else {
        return Ok(DeriveReport {
            n,
            e_n: NcElement::zero(&spec),
            outcome: Outcome::Fail(format!("residual not divisible by {unit}")),
        });
    };
    let outcome = match e_n.first_difference(&expected) {
        None => Outcome::Pass,
        Some((word, a, b)) => Outcome::Fail(format!("word {word}: {a} vs {b}")),
    };
    Ok(DeriveReport { n, e_n, outcome })
}

/// `e^{(1)}` reduced with the meridian relation; equals `q alpha w (l1 - lp1)`.
pub fn e_one_reduced() -> Result<(NcElement, NcElement), NcError> {
    let spec = exterior_algebra(true);
    let e1 = e_n_formula(1, &spec)?;
    let g = |name: &str| NcElement::gen(&spec, name);
    let target = (&g("w")? * &(&g("l1")? - &g("lp1")?)).scale(&(L::q() * L::alpha()));
    Ok((e1, target))
}
