mod common;

use common::*;
use num::complex::Complex64;
use num::ToPrimitive;
use ppsl2::eisenstein::*;
use ppsl2::modular::GroupElement;
use rand::Rng;
use std::f64::consts::PI;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn z(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn float(a: &GroupElement) -> Matrix {
    let m = a.to_mat2();
    let f = |r: &ppsl2::Rat| r.to_f64().unwrap();
    [[f(&m.a), f(&m.b)], [f(&m.c), f(&m.d)]]
}

fn points(seed: u64, n: usize) -> Vec<GroupPoint> {
    let mut r = rng(seed);
    (0..n).map(|_| GroupPoint::new(r.gen_range(-0.5..0.5), r.gen_range(0.8..3.0), r.gen_range(0.0..2.0 * PI))).collect()
}

#[test]
fn series_coefficients() {
    assert_eq!(sigma(6, 1), 12);
    assert_eq!(sigma(1, 1), 1);
    assert_eq!(sigma(2, 3), 9);
    let e2 = e2_series(10);
    assert_eq!(e2.truncation(), 10);
    assert_eq!(&e2.coefficients[..4], &[1, -24, -72, -96]);
    assert_eq!(e2.coefficients[6], -288);
    assert_eq!(&e4_series(3).coefficients, &[1, 240, 2160, 6720]);
}

#[test]
fn e2_at_i() {
    let (v, tail) = e2_eval(I, 100);
    assert!((v - 3.0 / PI).norm() < 1e-12, "{v}");
    assert!(tail < 1e-12);
    assert!(e2_corrected(I, 100).norm() < 1e-12);
}

#[test]
fn quasi_modularity_defect() {
    let mut r = rng(60);
    let s = e2_series(200);
    for _ in 0..10 {
        // both z and −1/z stay well inside the half-plane
        let t: f64 = r.gen_range(0.6..2.5);
        let q = z(t.cos(), t.sin()) * r.gen_range(0.9f64..1.1);
        let defect = s.eval(-q.inv()) - q * q * s.eval(q);
        let want = 12.0 * q / (2.0 * PI * I);
        assert!((defect - want).norm() <= 1e-9 * want.norm(), "{q}");
    }
}

#[test]
fn corrected_series_has_weight_two() {
    let q = z(1.0, 2.0);
    let lhs = e2_corrected(-q.inv(), 200);
    let rhs = q * q * e2_corrected(q, 200);
    assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm(), "{lhs} {rhs}");
    let mut r = rng(61);
    for _ in 0..10 {
        let p = z(r.gen_range(-2.0..2.0), r.gen_range(0.3..2.0));
        let (a, b) = (e2_corrected(-p.inv(), 200), p * p * e2_corrected(p, 200));
        assert!((a - b).norm() <= 1e-9 * b.norm().max(1.0), "{p}");
        let (c, d) = (e4_eval(-p.inv(), 200), p.powi(4) * e4_eval(p, 200));
        assert!((c - d).norm() <= 1e-9 * d.norm(), "{p}");
    }
}

#[test]
fn antiholomorphic_derivative() {
    let d = dzbar(|w| e2_corrected(w, 200), z(0.0, 2.0), 1e-4);
    assert!((d - 3.0 * I / (2.0 * PI) / 4.0).norm() <= 1e-6, "{d}");
    let mut r = rng(62);
    for _ in 0..5 {
        let p = z(r.gen_range(-0.5..0.5), r.gen_range(0.8..2.0));
        assert!(dzbar(|w| e2_eval(w, 200).0, p, 1e-4).norm() < 1e-6);
    }
}

#[test]
fn lift_examples() {
    let f = |w: Complex64| e2_corrected(w, 200);
    let id = [[1.0, 0.0], [0.0, 1.0]];
    assert_eq!(lift(&id, 1, &f), f(I));
    let g = GroupPoint::new(0.3, 1.7, 0.4);
    let back = GroupPoint::from_matrix(&g.to_matrix());
    assert!((back.x - g.x).abs() < 1e-14 && (back.y - g.y).abs() < 1e-14 && (back.theta - g.theta).abs() < 1e-14);
}

#[test]
fn lift_is_left_invariant() {
    let phi = e2_lift(200);
    let psi = e4_lift(200);
    let mut r = rng(63);
    let mut gammas: Vec<GroupElement> = ["S", "T", "U"].map(w).to_vec();
    gammas.extend((0..20).map(|_| random_element(&mut r, 4)));
    for (k, gamma) in gammas.iter().enumerate() {
        let g = points(64 + k as u64, 1)[0];
        let moved = GroupPoint::from_matrix(&mat_mul(&float(gamma), &g.to_matrix()));
        let (a, b) = (phi(&moved), phi(&g));
        assert!((a - b).norm() <= 1e-9 * b.norm().max(1.0), "{gamma}: {a} {b}");
        let (c, d) = (psi(&moved), psi(&g));
        assert!((c - d).norm() <= 1e-9 * d.norm().max(1.0), "{gamma}");
    }
}

#[test]
fn cayley_action_on_the_e2_lift() {
    let phi = e2_lift(200);
    let st = Stencil { phi: &phi, h: 1e-4 };
    for g in points(65, 20) {
        let v = phi(&g);
        assert!((st.f_op(&g) - 3.0 / PI).norm() <= 1e-4, "F at {g:?}");
        assert!((st.h_op(&g) - 2.0 * v).norm() <= 1e-5, "H at {g:?}");
        assert!(st.casimir(&g).norm() <= 1e-4, "casimir at {g:?}");
    }
}

#[test]
fn displayed_operators_differ() {
    let phi = e2_lift(200);
    let st = Stencil { phi: &phi, h: 1e-4 };
    let g = GroupPoint::new(0.1, 1.3, 0.7);
    let v = phi(&g);
    // −∂θ multiplies by −2i instead of 2
    assert!((st.h_printed(&g) + 2.0 * I * v).norm() < 1e-6);
    assert!((st.h_printed(&g) - 2.0 * v).norm() > 0.1);
    let conj = |p: &GroupPoint| phi(p).conj();
    let sc = Stencil { phi: &conj, h: 1e-4 };
    assert!((sc.e_op(&g) - 3.0 / PI).norm() < 1e-4);
    assert!((sc.e_printed(&g) - 3.0 / PI).norm() > 1e-2);
}

#[test]
fn operators_are_right_derivatives() {
    let phi = e2_lift(200);
    let st = Stencil { phi: &phi, h: 1e-4 };
    for g in points(66, 5) {
        for (op, x) in [(st.h_op(&g), cayley::h()), (st.e_op(&g), cayley::e()), (st.f_op(&g), cayley::f())] {
            let rd = complex_right_derivative(&phi, &g, &x, 1e-4);
            assert!((op - rd).norm() < 1e-6, "{g:?}: {op} vs {rd}");
        }
    }
}

#[test]
fn weight_four_lift() {
    let psi = e4_lift(200);
    let st = Stencil { phi: &psi, h: 1e-4 };
    for g in points(67, 10) {
        let v = psi(&g);
        assert!(st.f_op(&g).norm() <= 1e-4 * v.norm().max(1.0));
        assert!((st.h_op(&g) - 4.0 * v).norm() <= 1e-5 * v.norm().max(1.0));
        // Δ = k(k−1) on holomorphic lifts of weight 2k
        assert!((st.casimir(&g) - 2.0 * v).norm() <= 1e-4 * v.norm().max(1.0), "{g:?}");
    }
}

#[test]
fn constants_and_step_size() {
    let one = |_: &GroupPoint| Complex64::new(1.0, 0.0);
    let st = Stencil { phi: &one, h: 1e-3 };
    let g = GroupPoint::new(0.2, 1.1, 0.3);
    assert_eq!(st.casimir(&g), Complex64::new(0.0, 0.0));
    let phi = e2_lift(200);
    let res = |h: f64| (Stencil { phi: &phi, h }.f_op(&g) - 3.0 / PI).norm();
    let ratio = res(2e-2) / res(1e-2);
    assert!((3.0..5.0).contains(&ratio), "{ratio}");
}
