use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::chvar::{inv_sl2, Mat2C};

use super::diagram::Diagram;
use super::element::{Multicurve, SkeinElement};
use super::resolve::Resolver;
use super::word::CurveClass;

/// `rho` applied to a word in the hole generators; `rho[i - 1]` is the image of `g_i`.
pub fn word_matrix(word: &[i32], rho: &[Mat2C]) -> Mat2C {
    word.iter().fold(Mat2C::identity(), |acc, &l| {
        let g = rho[l.unsigned_abs() as usize - 1];
        acc * if l > 0 { g } else { inv_sl2(&g) }
    })
}

/// `-tr(rho(w))`: the classical value of a loop with word `w`.
pub fn epsilon_of_word(word: &[i32], rho: &[Mat2C]) -> Complex64 {
    -word_matrix(word, rho).trace()
}

pub fn epsilon_of_class(c: &CurveClass, rho: &[Mat2C]) -> Complex64 {
    epsilon_of_word(c.word(), rho)
}

pub fn epsilon_of_multicurve(m: &Multicurve, rho: &[Mat2C]) -> Complex64 {
    m.classes().iter().map(|c| epsilon_of_class(c, rho)).product()
}

/// The classical evaluation of an element at the representation `rho`.
pub fn epsilon_of_element(a: &SkeinElement, rho: &[Mat2C]) -> Complex64 {
    a.terms()
        .map(|(m, c)| {
            let k = c.specialize_classical().to_f64().unwrap_or(f64::NAN);
            epsilon_of_multicurve(m, rho) * k
        })
        .sum()
}

/// The state sum of `d` with coefficients specialized before resolution.
pub fn epsilon_of_diagram(d: &Diagram, rho: &[Mat2C]) -> Complex64 {
    Resolver::new(d).classical(&|w| epsilon_of_word(w, rho))
}
