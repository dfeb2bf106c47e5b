mod common;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use skein_torsion::chvar::{random_complex, random_sl2, Mat2C};
use skein_torsion::ring::LaurentScalar;
use skein_torsion::skein::{
    canonical_diagram, epsilon_of_diagram, epsilon_of_element, epsilon_of_multicurve, has_canonical_diagram, q,
    resolve, resolve_capped, verify_skein_identity, Board, Curve, CurveClass, Diagram, Multicurve, Point,
    SkeinAlgebra, SkeinElement, SkeinError,
};

use common::{check_local_moves, engine_map, kink, naive_resolve, random_diagram};

fn neg_alpha() -> LaurentScalar {
    -LaurentScalar::alpha()
}

fn unit_times(n: usize, c: LaurentScalar) -> SkeinElement {
    SkeinElement::unit(n).scale(&c)
}

fn h_pow(k: i64) -> LaurentScalar {
    LaurentScalar::h_pow(k)
}

#[test]
fn trivial_loop_is_minus_alpha() {
    let d = Diagram::parse("board holes=2\ncurve a : (0,1) (3,1) (3,2) (0,2)\n").unwrap();
    assert_eq!(resolve(&d).unwrap(), unit_times(2, neg_alpha()));
    let e = resolve(&d).unwrap();
    assert_eq!(e.coeff(&Multicurve::empty()).to_string(), "-1*q^{-2/2} -1*q^{2/2}");
}

#[test]
fn curl_factors() {
    // a positive or negative kink on a trivial loop
    let base = Diagram::parse("board holes=0\ncurve a : (0,0) (3,0) (3,3) (0,3)\n").unwrap();
    for flip in [false, true] {
        for over_first in [false, true] {
            let mut pts = kink(&Point::ints(0, 0), &Point::ints(1, 0), &q(1, 2), flip);
            pts.pop();
            pts.extend([Point::ints(3, 0), Point::ints(3, 3), Point::ints(0, 3)]);
            let d = Diagram::build(Board::new(0), vec![Curve::new("a", pts)], |_| over_first).unwrap();
            assert_eq!(d.crossing_count(), 1);
            let w = d.writhe();
            let expected = resolve(&base).unwrap().scale(&-h_pow(3 * w));
            assert_eq!(resolve(&d).unwrap(), expected, "flip={flip} over_first={over_first} writhe={w}");
        }
    }
}

#[test]
fn two_state_curl_by_hand() {
    // q^{1/2}(-alpha) + q^{-1/2} = -q^{3/2}
    let lhs = h_pow(1) * neg_alpha() + h_pow(-1);
    assert_eq!(lhs, -h_pow(3));
}

#[test]
fn trefoil_matches_oracle() {
    let text = "board holes=0\n\
                curve k : (0,3) (2,-1) (-2,-1)\n\
                curve m : (0,-2) (2,2) (-2,2)\n\
                over : k m k m k m\n";
    let d = Diagram::parse(text).unwrap();
    assert_eq!(d.crossing_count(), 6);
    assert_eq!(engine_map(&resolve(&d).unwrap()), naive_resolve(&d));
}

#[test]
fn oracle_equivalence_on_random_diagrams() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut crossings = 0;
    for i in 0..200 {
        let n = rng.random_range(0..=3);
        let mut d = random_diagram(&mut rng, n, 10);
        while i % 2 == 0 && d.crossing_count() < 3 {
            d = random_diagram(&mut rng, n, 10);
        }
        crossings += d.crossing_count();
        let e = resolve(&d).unwrap();
        assert_eq!(engine_map(&e), naive_resolve(&d), "diagram {i}:\n{d}");
    }
    assert!(crossings > 400, "generator too sparse: {crossings}");
}

#[test]
fn r2_r3_and_r1_on_random_diagrams() {
    let done = check_local_moves(11, 200).unwrap();
    assert!(done.iter().all(|&k| k > 30), "{done:?}");
}

#[test]
fn r2_parallel_loops_around_a_hole() {
    // two loops around hole 1 crossing twice resolve to the parallel pair
    let text = "board holes=1\n\
                curve a : (1/2,-1/2) (3/2,-1/2) (3/2,1/2) (1/2,1/2)\n\
                curve b : (3/8,-5/8) (7/4,-5/8) (7/4,5/8) (3/8,5/8)\n\
                over : a a\n";
    let mut d = Diagram::parse(text);
    if d.is_err() {
        // shift b so that it crosses a on its right edge only
        let t2 = "board holes=1\n\
                  curve a : (1/2,-1/2) (3/2,-1/2) (3/2,1/2) (1/2,1/2)\n\
                  curve b : (5/8,-5/8) (7/4,-5/8) (7/4,5/8) (5/8,5/8)\n\
                  over : a a\n";
        d = Diagram::parse(t2);
    }
    let d = d.unwrap();
    let m = Multicurve::from_sets(&[vec![1], vec![1]]).unwrap();
    assert_eq!(resolve(&d).unwrap(), SkeinElement::basis(1, m));
}

#[test]
fn state_cap_enforced() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let d = loop {
        let d = random_diagram(&mut rng, 1, 10);
        if d.crossing_count() >= 4 {
            break d;
        }
    };
    assert!(matches!(resolve_capped(&d, 2), Err(SkeinError::StateCap { .. })));
}

fn all_laminar_multicurves(n: usize, max_components: usize) -> Vec<Vec<Vec<usize>>> {
    let sets: Vec<Vec<usize>> =
        (1u32..(1 << n)).map(|mask| (1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect()).collect();
    let mut out = vec![vec![]];
    let mut frontier: Vec<(usize, Vec<Vec<usize>>)> = vec![(0, vec![])];
    for _ in 0..max_components {
        let mut next = Vec::new();
        for (start, fam) in &frontier {
            for (j, s) in sets.iter().enumerate().skip(*start) {
                let ok = fam.iter().all(|f: &Vec<usize>| {
                    let inter = f.iter().filter(|x| s.contains(x)).count();
                    inter == 0 || inter == f.len() || inter == s.len()
                });
                if ok {
                    let mut g = fam.clone();
                    g.push(s.clone());
                    out.push(g.clone());
                    next.push((j, g));
                }
            }
        }
        frontier = next;
    }
    out
}

#[test]
fn canonical_diagrams_resolve_to_themselves() {
    let mut checked = 0;
    let mut crossing_pairs = 0;
    for n in 0..=5 {
        let max_c = if n == 5 { 3 } else { 4 };
        for fam in all_laminar_multicurves(n, max_c) {
            let m = Multicurve::from_sets(&fam).unwrap();
            if !has_canonical_diagram(&m) {
                crossing_pairs += 1;
                continue;
            }
            let d = canonical_diagram(&m, Board::new(n)).unwrap();
            assert_eq!(d.crossing_count(), 0);
            assert_eq!(resolve(&d).unwrap(), SkeinElement::basis(n, m.clone()), "{m}");
            checked += 1;
        }
    }
    assert!(checked > 1000, "{checked}");
    assert!(crossing_pairs > 0);
}

#[test]
fn canonical_examples() {
    let b = Board::new(3);
    let d = canonical_diagram(&Multicurve::from_sets(&[vec![1, 3]]).unwrap(), b).unwrap();
    let cl = d.curves[0].class(3);
    assert_eq!(cl.enclosed(), vec![1, 3]);
    let d = canonical_diagram(&Multicurve::from_sets(&[vec![1, 2], vec![1]]).unwrap(), b).unwrap();
    assert_eq!(d.curves.len(), 2);
    assert_eq!(d.crossing_count(), 0);
}

fn random_canonical(rng: &mut ChaCha8Rng, n: usize, max_components: usize) -> Multicurve {
    loop {
        let k = rng.random_range(0..=max_components);
        let fam: Vec<Vec<usize>> = (0..k)
            .map(|_| {
                let mut s: Vec<usize> = (1..=n).filter(|_| rng.random_bool(0.5)).collect();
                if s.is_empty() {
                    s.push(rng.random_range(1..=n));
                }
                s
            })
            .collect();
        if let Ok(m) = Multicurve::from_sets(&fam) {
            if has_canonical_diagram(&m) {
                return m;
            }
        }
    }
}

#[test]
fn unit_is_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let n = rng.random_range(1..=4);
        let alg = SkeinAlgebra::new(n);
        let m = random_canonical(&mut rng, n, 3);
        let e = alg.basis(m.clone());
        assert_eq!(alg.multiply(&SkeinElement::unit(n), &e).unwrap(), e);
        assert_eq!(alg.multiply(&e, &SkeinElement::unit(n)).unwrap(), e);
    }
}

#[test]
fn annulus_is_a_polynomial_algebra() {
    let alg = SkeinAlgebra::new(1);
    let power = |k: usize| Multicurve::from_sets(&vec![vec![1]; k]).unwrap();
    for i in 0..=6 {
        for j in 0..=6 {
            let da = canonical_diagram(&power(i), Board::new(1)).unwrap();
            let db = canonical_diagram(&power(j), Board::new(1)).unwrap();
            assert_eq!(alg.stack(&da, &db).unwrap().crossing_count(), 0);
            let p = alg.multiply_basis(&power(i), &power(j)).unwrap();
            assert_eq!(p, alg.basis(power(i + j)), "{i} {j}");
        }
    }
}

#[test]
fn x1t1_style_product_on_three_holes() {
    let alg = SkeinAlgebra::new(3);
    let a = Multicurve::from_sets(&[vec![1, 2]]).unwrap();
    let b = Multicurve::from_sets(&[vec![2, 3]]).unwrap();
    let ab = alg.multiply_basis(&a, &b).unwrap();
    let ba = alg.multiply_basis(&b, &a).unwrap();
    assert_eq!(ab.len(), 4);
    let peripheral = |sets: &[Vec<usize>]| Multicurve::from_sets(sets).unwrap();
    assert!(ab.coeff(&peripheral(&[vec![1], vec![3]])).is_one());
    assert!(ab.coeff(&peripheral(&[vec![2], vec![1, 2, 3]])).is_one());
    // the two {1,3} curves carry q and q^{-1}, swapped by reversing the order
    let q_terms: Vec<_> = ab.terms().filter(|(m, _)| m.len() == 1).collect();
    assert_eq!(q_terms.len(), 2);
    for (m, c) in q_terms {
        assert_eq!(m.classes()[0].enclosed(), vec![1, 3]);
        assert!(*c == LaurentScalar::q() || *c == LaurentScalar::qbar());
        assert_eq!(ba.coeff(m), c.bar());
    }
    // t1 x1 - x1 t1 = (q - qbar)(l1 - l'1)
    let diff = ba.sub(&ab);
    assert_eq!(diff.len(), 2);
}

#[test]
fn associativity_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..15 {
        let n = rng.random_range(1..=3);
        let alg = SkeinAlgebra::new(n);
        let ms: Vec<SkeinElement> = (0..3).map(|_| alg.basis(random_canonical(&mut rng, n, 2))).collect();
        let left = alg.multiply(&alg.multiply(&ms[0], &ms[1]).unwrap(), &ms[2]).unwrap();
        let right = alg.multiply(&ms[0], &alg.multiply(&ms[1], &ms[2]).unwrap()).unwrap();
        assert_eq!(left, right);
    }
}

fn random_rho(rng: &mut ChaCha8Rng, n: usize) -> Vec<Mat2C> {
    (0..n).map(|_| random_sl2(rng)).collect()
}

#[test]
fn epsilon_basics() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let rho = random_rho(&mut rng, 2);
    assert_eq!(epsilon_of_element(&SkeinElement::unit(2), &rho), Complex64::new(1.0, 0.0));
    let t1 = Multicurve::from_sets(&[vec![1]]).unwrap();
    let v = epsilon_of_multicurve(&t1, &rho);
    assert!((v + rho[0].trace()).norm() < 1e-12);
    let m = Multicurve::from_sets(&[vec![1, 2]]).unwrap();
    let v = epsilon_of_multicurve(&m, &rho);
    assert!((v + (rho[0] * rho[1]).trace()).norm() < 1e-12);
    let _ = CurveClass::band_below(&[1, 2]);
}

#[test]
fn specialization_commutes_with_resolution() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..60 {
        let n = rng.random_range(0..=3);
        let d = random_diagram(&mut rng, n, 8);
        let rho = random_rho(&mut rng, n);
        let a = epsilon_of_element(&resolve(&d).unwrap(), &rho);
        let b = epsilon_of_diagram(&d, &rho);
        assert!((a - b).norm() <= 1e-9 * (1.0 + a.norm()), "{a} vs {b}");
    }
}

#[test]
fn epsilon_is_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = 3;
    let alg = SkeinAlgebra::new(n);
    let coeff = |rng: &mut ChaCha8Rng| {
        LaurentScalar::from_terms((0..2).map(|_| (rng.random_range(-3..=3i64), rng.random_range(-3..=3i64))))
    };
    for _ in 0..20 {
        let mk = |rng: &mut ChaCha8Rng| {
            let mut e = SkeinElement::zero(n);
            for _ in 0..2 {
                e.add_term(random_canonical(rng, n, 2), coeff(rng));
            }
            e
        };
        let (a, b) = (mk(&mut rng), mk(&mut rng));
        let ab = alg.multiply(&a, &b).unwrap();
        for _ in 0..5 {
            let rho = random_rho(&mut rng, n);
            let lhs = epsilon_of_element(&ab, &rho);
            let rhs = epsilon_of_element(&a, &rho) * epsilon_of_element(&b, &rho);
            assert!((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()), "{lhs} vs {rhs}");
        }
    }
    let _ = random_complex(&mut rng, 1.0);
}

#[test]
fn identity_report_detects_difference() {
    let d = Diagram::parse("board holes=1\ncurve a : (1/2,-1/2) (3/2,-1/2) (3/2,1/2) (1/2,1/2)\n").unwrap();
    let one = LaurentScalar::one();
    let ok = verify_skein_identity(&[(one.clone(), d.clone())], &[(one.clone(), d.clone())]).unwrap();
    assert!(ok.passed());
    let bad = verify_skein_identity(&[(one.clone(), d.clone())], &[(LaurentScalar::q(), d)]).unwrap();
    assert!(!bad.passed());
    assert!(bad.detail().contains("{1}"));
}

#[test]
fn products_of_registered_multicurves() {
    // a product produces curves with no comb drawing; they can be multiplied further
    let alg = SkeinAlgebra::new(3);
    let a = Multicurve::from_sets(&[vec![1, 2]]).unwrap();
    let b = Multicurve::from_sets(&[vec![2, 3]]).unwrap();
    let ab = alg.multiply_basis(&a, &b).unwrap();
    let odd = ab.terms().map(|(m, _)| m.clone()).find(|m| !has_canonical_diagram(m)).unwrap();
    let d = alg.representative(&odd).unwrap();
    assert_eq!(resolve(&d).unwrap(), alg.basis(odd.clone()));
    let sq = alg.multiply_basis(&odd, &odd).unwrap();
    assert!(!sq.is_zero());
}
