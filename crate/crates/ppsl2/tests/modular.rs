use std::collections::BTreeMap;

use num::BigInt;
use ppsl2::modular::*;
use ppsl2::{int, rat};
use proptest::prelude::*;

fn w(s: &str) -> GroupElement {
    s.parse::<GroupWord>().unwrap().to_matrix()
}

fn pt(s: &str) -> ExtendedRational {
    s.parse().unwrap()
}

fn el(a: i64, b: i64, c: i64, d: i64) -> GroupElement {
    GroupElement::new(a, b, c, d).unwrap()
}

fn arb_word() -> impl Strategy<Value = GroupElement> {
    proptest::collection::vec(0usize..5, 0..10).prop_map(|ls| {
        let gens = [GroupElement::s(), GroupElement::t(), GroupElement::t().inv(), GroupElement::u(), GroupElement::u().inv()];
        ls.iter().fold(GroupElement::identity(), |acc, i| acc.mul(&gens[*i]))
    })
}

#[test]
fn parse_and_display_points() {
    assert_eq!(pt("2/4"), pt("1/2"));
    assert_eq!(pt("-3/-6").to_string(), "1/2");
    assert_eq!(pt("1/0"), ExtendedRational::infinity());
    assert_eq!(pt("-1/0"), ExtendedRational::infinity());
    assert_eq!(pt("inf"), ExtendedRational::infinity());
    assert!("0/0".parse::<ExtendedRational>().is_err());
    assert!("x".parse::<ExtendedRational>().is_err());
    assert_eq!(pt("-7"), ExtendedRational::integer(-7));
}

#[test]
fn circle_order_starts_at_infinity() {
    let mut v = vec![pt("1"), pt("-2"), pt("1/0"), pt("0"), pt("1/2")];
    v.sort();
    let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    assert_eq!(s, ["1/0", "-2/1", "0/1", "1/2", "1/1"]);
}

#[test]
fn ccw_examples() {
    assert!(ccw(&pt("0"), &pt("1"), &pt("1/0")).unwrap());
    assert!(!ccw(&pt("0"), &pt("1/0"), &pt("1")).unwrap());
    assert!(ccw(&pt("1/0"), &pt("-1"), &pt("0")).unwrap());
    assert!(ccw(&pt("0"), &pt("0"), &pt("1")).is_err());
}

#[test]
fn right_action_examples() {
    assert_eq!(act_right(&pt("1"), &GroupElement::t()), pt("0"));
    assert_eq!(edge_endpoints(&GroupElement::identity()), (pt("0"), pt("1/0")));
    assert_eq!(edge_endpoints(&GroupElement::s()), (pt("1/0"), pt("0")));
    assert_eq!(edge_endpoints(&GroupElement::u()), (pt("0"), pt("-1")));
}

#[test]
fn word_examples() {
    assert_eq!(w("T^-1·U"), GroupElement::r());
    assert_eq!(w("T U⁻¹ T"), GroupElement::s());
    assert_eq!(w(""), GroupElement::identity());
    assert_eq!(w("I"), GroupElement::identity());
    assert_eq!(w("S S"), GroupElement::identity());
    assert_eq!(w("R R R"), GroupElement::identity());
    assert!("Q".parse::<GroupWord>().is_err());
}

#[test]
fn printed_coset_exponent_sums() {
    let printed = [("I", 0), ("S", 3), ("US", 4), ("T^-1", 1), ("TS", 2), ("U^-1", 5)];
    for (word, k) in printed {
        assert_eq!(commutant_coset(&w(word)), k, "{word}");
    }
    // the doe relations in the proof
    for (word, k) in [("SU", 4), ("SU^-1", 2), ("SU^2", 5), ("SU^-2", 1), ("SU^3", 0), ("SU^-3", 0)] {
        assert_eq!(commutant_coset(&w(word)), k, "{word}");
    }
}

#[test]
fn triangle_orientations_span_all_cosets() {
    for [x, y, z] in farey_triangles(5) {
        let mut seen = [false; 6];
        for (p, q) in [(&x, &y), (&y, &z), (&z, &x)] {
            seen[commutant_coset(&edge_label(p, q).unwrap()) as usize] = true;
            seen[commutant_coset(&edge_label(q, p).unwrap()) as usize] = true;
        }
        assert!(seen.iter().all(|b| *b), "{x} {y} {z}");
    }
}

/// The neighbours `(p' + kp)/(q' + kq)` of `v = p/q`, consecutive in `k`.
fn neighbours(v: &ExtendedRational, range: std::ops::RangeInclusive<i64>) -> Vec<ExtendedRational> {
    let (p, q) = (v.p().clone(), v.q().clone());
    let any = farey_points(6).into_iter().find(|w| w.is_farey_neighbour(v)).unwrap();
    let (p0, q0) = (any.p().clone(), any.q().clone());
    range.map(|k| ExtendedRational::new(&p0 + &p * BigInt::from(k), &q0 + &q * BigInt::from(k)).unwrap()).collect()
}

#[test]
fn every_third_edge_lies_in_the_commutant() {
    for v in farey_points(5) {
        let ns = neighbours(&v, -12..=12);
        let marks: Vec<char> = ns
            .iter()
            .map(|n| {
                let out = commutant_coset(&edge_label(&v, n).unwrap()) == 0;
                let inn = commutant_coset(&edge_label(n, &v).unwrap()) == 0;
                assert!(!(out && inn));
                if out {
                    'o'
                } else if inn {
                    'i'
                } else {
                    '-'
                }
            })
            .collect();
        let hits: Vec<usize> = (0..marks.len()).filter(|k| marks[*k] != '-').collect();
        assert!(hits.len() >= 7, "{v}: {}", marks.iter().collect::<String>());
        for pair in hits.windows(2) {
            assert_eq!(pair[1] - pair[0], 3, "{v}: {}", marks.iter().collect::<String>());
            assert_ne!(marks[pair[0]], marks[pair[1]], "orientations alternate at {v}");
        }
    }
}

#[test]
fn generation_examples() {
    assert_eq!(pt("0").generation(), 0);
    assert_eq!(pt("1/0").generation(), 0);
    assert_eq!(pt("1").generation(), 1);
    assert_eq!(pt("2/5").generation(), 4);
    assert_eq!(pt("-2/5").generation(), 4);
}

#[test]
fn enumeration_examples() {
    let s: Vec<String> = (0..8).map(|n| farey_enumeration(n).to_string()).collect();
    assert_eq!(s, ["0/1", "1/0", "1/1", "-1/1", "1/2", "2/1", "-2/1", "-1/2"]);
}

#[test]
fn enumeration_injective_and_monotone() {
    let mut seen = std::collections::BTreeSet::new();
    let mut g = 0;
    for n in 0..10_000u64 {
        let x = farey_enumeration(n);
        assert!(x.generation() >= g);
        g = x.generation();
        assert!(seen.insert(x));
    }
}

#[test]
fn parents_are_neighbours_and_older() {
    for x in farey_points(7).into_iter().skip(2) {
        let (lo, hi) = x.parents().unwrap();
        assert!(lo.is_farey_neighbour(&x) && x.is_farey_neighbour(&hi) && lo.is_farey_neighbour(&hi));
        assert!(lo.generation() < x.generation() && hi.generation() < x.generation());
        assert!(ccw(&lo, &x, &hi).unwrap());
    }
}

#[test]
fn edge_count_of_truncation() {
    for g in 0..7 {
        let v = farey_points(g).len();
        assert_eq!(farey_edges(g).len(), 2 * v - 3);
        assert!(farey_edges(g).iter().all(in_basis));
    }
}

#[test]
fn matrix_to_word_examples() {
    for m in [el(1, 0, 0, 1), el(0, -1, 1, 0), el(2, 1, 1, 1), el(5, 2, 7, 3), el(-3, 4, 2, -3)] {
        let word = matrix_to_word(&m);
        assert_eq!(word_to_matrix(&word), m, "{word}");
        assert!(word.letters.iter().all(|l| matches!(l, Letter::S | Letter::T | Letter::TInv | Letter::U | Letter::UInv)));
    }
}

#[test]
fn identity_tessellation_and_characteristic_map() {
    let pts: Vec<ExtendedRational> = (0..64).map(farey_enumeration).collect();
    let c = tessellation_from_enumeration(&pts, 4).unwrap();
    assert!(c.map.iter().all(|(x, y)| x == y));
    let a = w("T^2 S U");
    let t = farey_tessellation(5, &a);
    let m = characteristic_map(&t, 4).unwrap();
    for (x, y) in &m {
        assert_eq!(y, &act_right(x, &a), "{x}");
    }
}

#[test]
fn characteristic_maps_compose() {
    let (a, b) = (w("U T"), w("S U^-1"));
    let fa = characteristic_map(&farey_tessellation(6, &a), 3).unwrap();
    let fb = characteristic_map(&farey_tessellation(6, &b), 3).unwrap();
    let fab = characteristic_map(&farey_tessellation(8, &b.mul(&a)), 3).unwrap();
    // x.B.A = x.(BA) under the right action
    for (x, y) in &fb {
        if let Some(z) = fa.get(y) {
            assert_eq!(z, &fab[x]);
        }
    }
}

#[test]
fn dyadic_tessellation_is_order_preserving() {
    let points = dyadic_enumeration(6);
    let c = tessellation_from_enumeration(&points, 4).unwrap();
    assert!(preserves_cyclic_order(&c.map));
    assert_eq!(c.map[&pt("1")], rat(3, 4));
    assert_eq!(c.map[&pt("0")], rat(1, 2));
    assert_eq!(c.map[&pt("1/0")], int(0));
    let mut short = points.clone();
    short.truncate(5);
    assert!(tessellation_from_enumeration(&short, 4).is_err());
}

proptest! {
    #[test]
    fn word_round_trip(a in arb_word()) {
        prop_assert_eq!(word_to_matrix(&matrix_to_word(&a)), a.clone());
        let text = matrix_to_word(&a).to_string();
        prop_assert_eq!(text.parse::<GroupWord>().unwrap().to_matrix(), a);
    }

    #[test]
    fn coset_is_a_homomorphism(a in arb_word(), b in arb_word()) {
        prop_assert_eq!(commutant_coset(&a.mul(&b)), (commutant_coset(&a) + commutant_coset(&b)) % 6);
    }

    #[test]
    fn right_action_composes(a in arb_word(), b in arb_word(), k in 0u64..200) {
        let x = farey_enumeration(k);
        prop_assert_eq!(act_right(&act_right(&x, &a), &b), act_right(&x, &a.mul(&b)));
    }

    #[test]
    fn edge_of_sa_is_edge_of_a_reversed(a in arb_word()) {
        let (x, y) = edge_endpoints(&a);
        prop_assert_eq!(edge_endpoints(&GroupElement::s().mul(&a)), (y, x));
        prop_assert_eq!(edge_endpoints(&a), (act_right(&pt("0"), &a), act_right(&pt("1/0"), &a)));
    }

    #[test]
    fn edge_label_inverts_endpoints(a in arb_word()) {
        let (x, y) = edge_endpoints(&a);
        prop_assert_eq!(edge_label(&x, &y).unwrap(), a);
    }

    #[test]
    fn ccw_matches_sorted_order(i in 0u64..500, j in 0u64..500, k in 0u64..500) {
        let (x, y, z) = (farey_enumeration(i), farey_enumeration(j), farey_enumeration(k));
        prop_assume!(x != y && y != z && x != z);
        // in sorted order from ∞, (p, q, r) with p < q < r is ccw
        let mut v = vec![x.clone(), y.clone(), z.clone()];
        v.sort();
        let sorted_is_ccw = ccw(&v[0], &v[1], &v[2]).unwrap();
        prop_assert!(sorted_is_ccw);
        let even = [(&x, &y, &z), (&y, &z, &x), (&z, &x, &y)].iter().any(|(a, b, c)| **a == v[0] && **b == v[1] && **c == v[2]);
        prop_assert_eq!(ccw(&x, &y, &z).unwrap(), even);
    }
}

#[test]
fn generation_of_parents_map_is_consistent() {
    let mut by_gen: BTreeMap<u32, usize> = BTreeMap::new();
    for x in farey_points(6) {
        *by_gen.entry(x.generation()).or_default() += 1;
    }
    assert_eq!(by_gen[&0], 2);
    for g in 1..=6 {
        assert_eq!(by_gen[&g], 1 << g);
    }
}
