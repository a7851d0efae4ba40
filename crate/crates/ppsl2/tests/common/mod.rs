#![allow(dead_code)]

use ppsl2::modular::{ExtendedRational, GroupElement, GroupWord};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn w(s: &str) -> GroupElement {
    s.parse::<GroupWord>().unwrap().to_matrix()
}

pub fn pt(s: &str) -> ExtendedRational {
    s.parse().unwrap()
}

pub fn el(a: i64, b: i64, c: i64, d: i64) -> GroupElement {
    GroupElement::new(a, b, c, d).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random word in S, T^±1, U^±1 of length at most `len`.
pub fn random_element(r: &mut impl Rng, len: usize) -> GroupElement {
    let gens = [GroupElement::s(), GroupElement::t(), GroupElement::t().inv(), GroupElement::u(), GroupElement::u().inv()];
    let n = r.gen_range(0..=len);
    (0..n).fold(GroupElement::identity(), |acc, _| acc.mul(&gens[r.gen_range(0..gens.len())]))
}

/// Angles avoiding the rational points of small height.
pub fn sample_angles(n: usize) -> Vec<f64> {
    (0..n).map(|k| (k as f64 + 0.3711) * std::f64::consts::TAU / n as f64).collect()
}
