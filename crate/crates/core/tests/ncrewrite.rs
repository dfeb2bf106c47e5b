use proptest::prelude::*;

use skein_torsion::ncrewrite::{
    collar_algebra, exterior_algebra, NcElement, Strategy, Word, COLLAR_GENERATORS, EXTERIOR_GENERATORS,
};
use skein_torsion::ring::LaurentScalar;

fn both_strategies(letters: &[u8], exterior: bool) {
    let spec = if exterior { exterior_algebra(true) } else { collar_algebra() };
    let w = Word(letters.to_vec());
    let l = spec.normalize_terms([(w.clone(), LaurentScalar::one())], Strategy::Leftmost);
    let r = spec.normalize_terms([(w, LaurentScalar::one())], Strategy::Rightmost);
    assert_eq!(l, r);
    assert!(l.keys().all(|k| spec.is_normal(k)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn collar_words_are_confluent(letters in prop::collection::vec(0u8..COLLAR_GENERATORS.len() as u8, 0..9)) {
        both_strategies(&letters, false);
    }

    #[test]
    fn products_normalize_associatively(
        a in prop::collection::vec(0u8..COLLAR_GENERATORS.len() as u8, 0..4),
        b in prop::collection::vec(0u8..COLLAR_GENERATORS.len() as u8, 0..4),
        c in prop::collection::vec(0u8..COLLAR_GENERATORS.len() as u8, 0..4),
    ) {
        let spec = collar_algebra();
        let e = |w: &[u8]| NcElement::normalize(&spec, [(Word(w.to_vec()), LaurentScalar::one())]);
        let (ea, eb, ec) = (e(&a), e(&b), e(&c));
        prop_assert_eq!(&(&ea * &eb) * &ec, &ea * &(&eb * &ec));
    }
}

#[test]
fn x_powers_past_t1_agree_for_both_strategies() {
    let spec = collar_algebra();
    let (t1, x) = (spec.index("t1").unwrap(), spec.index("x").unwrap());
    for n in [1, 2, 5, 12, 32] {
        let mut w = vec![x; n];
        w.push(t1);
        both_strategies(&w, false);
        let mut w = vec![t1];
        w.extend(vec![x; n]);
        both_strategies(&w, false);
    }
}

#[test]
fn exterior_meridian_words_are_confluent() {
    let spec = exterior_algebra(true);
    let g = |s: &str| spec.index(s).unwrap();
    let words = [
        vec![g("x"), g("t")],
        vec![g("x"), g("x"), g("t"), g("l1")],
        vec![g("t"), g("x"), g("w"), g("r")],
        vec![g("lp1"), g("x"), g("t"), g("x")],
    ];
    for w in words {
        both_strategies(&w, true);
    }
    assert_eq!(EXTERIOR_GENERATORS.len(), 9);
}
