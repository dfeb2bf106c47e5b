use std::collections::HashMap;
use std::sync::RwLock;

use num_integer::Integer;

use crate::ring::LaurentScalar;

use super::canonical::{canonical_diagram, has_canonical_diagram};
use super::diagram::{scale_about, Board, Curve, Diagram};
use super::element::{Multicurve, SkeinElement};
use super::geom::{q, Point, Q};
use super::resolve::{Resolver, DEFAULT_STATE_CAP};
use super::SkeinError;

/// First perturbation denominator and retry budget for stacking.
const FIRST_PRIME: i64 = 1009;
const MAX_RETRIES: usize = 16;

/// Corner-cutting attempts when drawing a resolved state.
const MAX_HALVINGS: usize = 40;

fn next_prime(mut p: i64) -> i64 {
    loop {
        p += 1;
        if (2..).take_while(|d: &i64| d * d <= p).all(|d| !p.is_multiple_of(&d)) {
            return p;
        }
    }
}

/// The skein algebra of an `n`-holed disk.
///
/// Products are computed geometrically. Basis elements with a comb drawing
/// use [`canonical_diagram`]; other multicurves are drawn from a state that
/// produced them in an earlier resolution, kept in a registry.
pub struct SkeinAlgebra {
    board: Board,
    state_cap: usize,
    registry: RwLock<HashMap<Multicurve, Diagram>>,
    products: RwLock<HashMap<(Multicurve, Multicurve), SkeinElement>>,
}

impl SkeinAlgebra {
    pub fn new(n: usize) -> Self {
        Self::with_cap(n, DEFAULT_STATE_CAP)
    }

    pub fn with_cap(n: usize, state_cap: usize) -> Self {
        Self {
            board: Board::new(n),
            state_cap,
            registry: RwLock::new(HashMap::new()),
            products: RwLock::new(HashMap::new()),
        }
    }

    pub fn board(&self) -> Board {
        self.board
    }

    fn check_board(&self, n: usize) -> Result<(), SkeinError> {
        if n != self.board.n {
            return Err(SkeinError::BoardMismatch { expected: self.board.n, found: n });
        }
        Ok(())
    }

    /// Resolve a diagram, recording drawings of the multicurves it produces.
    pub fn resolve(&self, d: &Diagram) -> Result<SkeinElement, SkeinError> {
        self.check_board(d.board.n)?;
        let resolver = Resolver::new(d);
        let (elem, witnesses) = resolver.run(self.state_cap)?;
        let missing: Vec<(Multicurve, Vec<u64>)> = {
            let reg = self.registry.read().expect("registry lock");
            witnesses.into_iter().filter(|(m, _)| !has_canonical_diagram(m) && !reg.contains_key(m)).collect()
        };
        for (m, states) in missing {
            let drawn = draw_state(&resolver, &m, &states, self.board)?;
            self.registry.write().expect("registry lock").entry(m).or_insert(drawn);
        }
        Ok(elem)
    }

    /// A crossingless diagram of `m`.
    pub fn representative(&self, m: &Multicurve) -> Result<Diagram, SkeinError> {
        if has_canonical_diagram(m) {
            return canonical_diagram(m, self.board);
        }
        self.registry
            .read()
            .expect("registry lock")
            .get(m)
            .cloned()
            .ok_or_else(|| SkeinError::NoRepresentative(m.to_string()))
    }

    /// Register a crossingless drawing for a multicurve.
    pub fn register(&self, d: &Diagram) -> Result<Multicurve, SkeinError> {
        self.check_board(d.board.n)?;
        if d.crossing_count() > 0 {
            return Err(SkeinError::NoRepresentative("a representative must be crossingless".into()));
        }
        let e = self.resolve(d)?;
        let (m, _) = e.terms().next().ok_or_else(|| SkeinError::Internal("empty resolution".into()))?;
        let m = m.clone();
        if !has_canonical_diagram(&m) {
            self.registry.write().expect("registry lock").entry(m.clone()).or_insert_with(|| d.clone());
        }
        Ok(m)
    }

    /// The product of two basis elements: `a` stacked over `b`.
    pub fn multiply_basis(&self, a: &Multicurve, b: &Multicurve) -> Result<SkeinElement, SkeinError> {
        let key = (a.clone(), b.clone());
        if let Some(e) = self.products.read().expect("product lock").get(&key) {
            return Ok(e.clone());
        }
        let (da, db) = (self.representative(a)?, self.representative(b)?);
        let stacked = self.stack(&da, &db)?;
        let e = self.resolve(&stacked)?;
        self.products.write().expect("product lock").insert(key, e.clone());
        Ok(e)
    }

    /// `da` over a slightly enlarged copy of `db`, in general position.
    pub fn stack(&self, da: &Diagram, db: &Diagram) -> Result<Diagram, SkeinError> {
        let n = self.board.n;
        let mid = q(n as i64 + 1, 2);
        let mut p = FIRST_PRIME;
        let mut last_err = String::new();
        for attempt in 0..MAX_RETRIES {
            let center = if attempt % 2 == 0 { Point::new(mid.clone(), q(0, 1)) } else { Point::new(mid.clone(), q(1, p)) };
            let k = Q::from_integer(1.into()) + q(1, p);
            let mut curves: Vec<Curve> = Vec::with_capacity(da.curves.len() + db.curves.len());
            let mut layers = Vec::new();
            for (i, c) in da.curves.iter().enumerate() {
                curves.push(Curve::new(format!("a{}", i + 1), c.points.clone()));
                layers.push(1);
            }
            let mut moved = true;
            for (i, c) in db.curves.iter().enumerate() {
                let pts: Vec<Point> = c.points.iter().map(|v| scale_about(v, &center, &k)).collect();
                let scaled = Curve::new(format!("b{}", i + 1), pts);
                moved &= scaled.class(n) == c.class(n);
                curves.push(scaled);
                layers.push(0);
            }
            if attempt % 2 == 1 {
                p = next_prime(p);
            }
            if !moved {
                last_err = "scaling changed a curve class".into();
                continue;
            }
            match Diagram::layered(self.board, curves, &layers) {
                Ok(d) => return Ok(d),
                Err(e) => last_err = e.to_string(),
            }
        }
        Err(SkeinError::Perturbation(last_err))
    }

    /// The bilinear product `a * b`.
    pub fn multiply(&self, a: &SkeinElement, b: &SkeinElement) -> Result<SkeinElement, SkeinError> {
        self.check_board(a.holes())?;
        self.check_board(b.holes())?;
        let mut out = SkeinElement::zero(self.board.n);
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let prod = self.multiply_basis(ma, mb)?;
                let c: LaurentScalar = ca * cb;
                for (m, v) in prod.terms() {
                    out.add_term(m.clone(), &c * v);
                }
            }
        }
        Ok(out)
    }

    pub fn basis(&self, m: Multicurve) -> SkeinElement {
        SkeinElement::basis(self.board.n, m)
    }
}

fn draw_state(resolver: &Resolver<'_>, m: &Multicurve, states: &[u64], board: Board) -> Result<Diagram, SkeinError> {
    let mut delta = q(1, 4);
    let mut last_err = String::new();
    for _ in 0..MAX_HALVINGS {
        let curves = resolver.realize(states, &delta);
        let classes: Vec<_> = curves.iter().map(|c| c.class(board.n)).collect();
        match Diagram::crossingless(board, curves) {
            Ok(d) => {
                let got = Multicurve::new(classes)?;
                if &got == m {
                    return Ok(d);
                }
                last_err = format!("drawn state gives {got}");
            }
            Err(e) => last_err = e.to_string(),
        }
        delta /= Q::from_integer(2.into());
    }
    Err(SkeinError::Internal(format!("cannot draw {m}: {last_err}")))
}
