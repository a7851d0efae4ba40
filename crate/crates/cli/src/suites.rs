//! One function per verification suite. Arguments are the knobs exposed on
//! the command line; the acceptance target calls them with the defaults.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num::complex::Complex64;
use num::{BigInt, Signed, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use ppsl2::eisenstein::{e2_corrected, e2_eval, e2_lift, Stencil, GroupPoint};
use ppsl2::forms::{adjacent, adjacent_pairs, kk_form, pair_value, ratio_report};
use ppsl2::halfplane::{build_tessellation, unit_lambdas, DecoratedTessellationTruncation, TriangulatedPolygon};
use ppsl2::harmonic::{hyperfan_fourier, quadrature_oracle, wavelet_fourier};
use ppsl2::mcform::{
    doe_quad, edge_wavelet, flip as flip_edge, flipped_wavelets, subarcs, unflipped_wavelets_with, verify_flip_invariance,
    FlipCase,
};
use ppsl2::modular::{
    commutant_coset, edge_label, farey_edges, farey_points, farey_tessellation, format_rat, matrix_to_word,
    ExtendedRational, Framing, GroupElement, GroupWord,
};
use ppsl2::wavelets::{
    absorb_global, bracket_structure, expand_in_basis, fan_partial_sum, hyperfan, hyperfan_partial_sum, mother_wavelet,
    normalized_wavelet, sl2_from_hyperfans, usa_closed_form, usa_deficiency, BasisExpansion,
};
use ppsl2::{int, rat, PiecewiseField, Rat, Sl2};

use crate::display::{self, Table};
use crate::{fmt_f64, rng, Report};

pub fn word(s: &str) -> Result<GroupElement, ppsl2::modular::ModularError> {
    Ok(s.parse::<GroupWord>()?.to_matrix())
}

fn w(s: &str) -> GroupElement {
    word(s).expect("fixed word")
}

fn name(a: &GroupElement) -> String {
    matrix_to_word(a).to_string()
}

/// A random word in `S, T^±1, U^±1` of length at most `len`.
pub fn random_element(r: &mut impl Rng, len: usize) -> GroupElement {
    let gens = [GroupElement::s(), GroupElement::t(), GroupElement::t().inv(), GroupElement::u(), GroupElement::u().inv()];
    let n = r.gen_range(0..=len);
    (0..n).fold(GroupElement::identity(), |acc, _| acc.mul(&gens[r.gen_range(0..gens.len())]))
}

/// Angles that avoid the rational points of small height.
fn sample_angles(n: usize) -> Vec<f64> {
    (0..n).map(|k| (k as f64 + 0.3711) * std::f64::consts::TAU / n as f64).collect()
}

fn some_neighbour(v: &ExtendedRational) -> ExtendedRational {
    match v.parents() {
        Some((lo, _)) => lo,
        None if v.is_infinity() => ExtendedRational::zero(),
        None => ExtendedRational::infinity(),
    }
}

pub fn cosets(max_gen: u32) -> Report {
    let mut rep = Report::new("cosets");
    let printed = [("I", 0), ("S", 3), ("US", 4), ("T^-1", 1), ("TS", 2), ("U^-1", 5)];
    for (s, k) in printed {
        let got = commutant_coset(&w(s));
        rep.check(got == k, || json!({"word": s, "expected": k, "got": got}));
    }
    let vertices = farey_points(max_gen);
    for v in &vertices {
        let n0 = some_neighbour(v);
        let (p, q) = (v.p().clone(), v.q().clone());
        let marks: Vec<u8> = (-12i64..=12)
            .map(|k| {
                let n = ExtendedRational::new(n0.p() + &p * BigInt::from(k), n0.q() + &q * BigInt::from(k)).expect("coprime");
                let out = commutant_coset(&edge_label(v, &n).expect("neighbours")) == 0;
                let inn = commutant_coset(&edge_label(&n, v).expect("neighbours")) == 0;
                match (out, inn) {
                    (true, false) => 1,
                    (false, true) => 2,
                    (false, false) => 0,
                    _ => 3,
                }
            })
            .collect();
        let hits: Vec<usize> = (0..marks.len()).filter(|k| marks[*k] != 0).collect();
        let ok = !marks.contains(&3)
            && hits.len() >= 7
            && hits.windows(2).all(|p| p[1] - p[0] == 3 && marks[p[0]] != marks[p[1]]);
        rep.check(ok, || json!({"vertex": v.to_string(), "marks": marks}));
    }
    rep.detail = json!({"max_gen": max_gen, "vertices": vertices.len()});
    rep
}

pub fn usa(max_gen: u32, seed: u64, samples: usize) -> Report {
    let mut rep = Report::new("usa");
    let (h, e, f) = (Sl2::h(), Sl2::e(), Sl2::f());
    let printed = [("I", h.add(&e).add(&f)), ("T", e.scale(&int(2)).add(&f)), ("U^-1", e.add(&f.scale(&int(2))))];
    for (s, want) in printed {
        let got = usa_deficiency(&w(s));
        rep.check(got.ok().as_ref() == Some(&want), || json!({"word": s, "printed": true}));
    }
    let mut labels: Vec<GroupElement> = farey_edges(max_gen).into_iter().flat_map(|a| [w("S").mul(&a), a]).collect();
    let mut r = rng(seed);
    labels.extend((0..samples).map(|_| random_element(&mut r, 12)));
    let bad: Vec<&GroupElement> =
        labels.par_iter().filter(|a| usa_deficiency(a).ok() != Some(usa_closed_form(a))).collect();
    for a in &labels {
        rep.check(!bad.contains(&a), || json!({"word": name(a), "matrix": a.to_string()}));
    }
    rep.detail = json!({"max_gen": max_gen, "matrices": labels.len(), "seed": seed});
    rep
}

pub fn bracket(samples: usize, seed: u64) -> Report {
    let mut rep = Report::new("bracket");
    let mut r = rng(seed);
    let mut cases = [0usize; 5];
    let mut n = 0usize;
    let id = hyperfan(&GroupElement::identity());
    while n < samples || cases.iter().any(|c| *c < 20) {
        let batch: Vec<GroupElement> = (n..n + 100)
            .map(|k| if k % 17 == 0 { w("T").pow(r.gen_range(-9..9)) } else { random_element(&mut r, 12) })
            .collect();
        let results: Vec<(u8, bool)> = batch
            .par_iter()
            .map(|a| {
                let (case, exp) = bracket_structure(a);
                (case, exp.materialize() == id.bracket(&hyperfan(a)))
            })
            .collect();
        for (a, (case, ok)) in batch.iter().zip(results) {
            cases[case as usize] += 1;
            rep.check(ok, || json!({"case": case, "word": name(a)}));
        }
        n += batch.len();
        if n > 100_000 {
            rep.check(false, || json!({"reason": "case coverage not reached", "cases": cases}));
            break;
        }
    }
    rep.detail = json!({"seed": seed, "samples": n, "cases": {"c=0": cases[0], "1": cases[1], "2": cases[2], "3": cases[3], "4": cases[4]}});
    rep
}

fn compare(rep: &mut Report, label: String, fld: &PiecewiseField, table: &Table) {
    for ((arc, start, _), want) in subarcs().into_iter().zip(table) {
        let got = fld.value_after(&start).neg();
        let ok = display::matrix(want).as_ref() == Some(&got);
        rep.check(ok, || json!({"table": label, "arc": arc, "displayed": want, "computed": sl2_text(&got)}));
    }
}

fn sl2_text(x: &Sl2) -> String {
    format!("{} {} {} {}", format_rat(&x.alpha), format_rat(&x.beta), format_rat(&x.gamma), format_rat(&-&x.alpha))
}

fn check_tables(rep: &mut Report) {
    let t = farey_tessellation(2, &GroupElement::identity());
    let q = doe_quad();
    let (tp, _) = flip_edge(&t, &q.e.0, &q.e.1).expect("doe is interior");
    let keys = [&q.a, &q.b, &q.c, &q.d, &q.e];
    for ((n, table), (x, y)) in display::BEFORE.iter().zip(keys) {
        compare(rep, format!("before {n}"), &edge_wavelet(&t, x, y).expect("interior"), table);
    }
    for ((n, table), fld) in display::BEFORE_NORMALIZED.iter().zip(unflipped_wavelets_with(&Framing::standard())) {
        compare(rep, format!("before normalized {n}"), &fld, table);
    }
    for ((n, table), (x, y)) in display::AFTER.iter().zip(keys) {
        compare(rep, format!("after {n}"), &edge_wavelet(&tp, x, y).expect("interior"), table);
    }
    for ((n, table), fld) in display::AFTER_NORMALIZED.iter().zip(flipped_wavelets()) {
        compare(rep, format!("after normalized {n}"), &fld, table);
    }
}

pub fn flip_case(s: &str) -> Option<FlipCase> {
    FlipCase::all().into_iter().find(|c| c.name() == s || (s != "doe" && word(s).ok().is_some_and(|a| c == &FlipCase::Side(a))))
}

/// `case = None` runs the tables and every doe position.
pub fn flip(case: Option<FlipCase>) -> Report {
    let mut rep = Report::new("flip");
    let cases = match &case {
        Some(c) => vec![c.clone()],
        None => FlipCase::all(),
    };
    if case.is_none() || case == Some(FlipCase::Doe) {
        check_tables(&mut rep);
    }
    let mut reports = Vec::new();
    for c in &cases {
        let fr = verify_flip_invariance(c);
        rep.check(fr.vanishes(), || fr.to_json());
        reports.push(fr.to_json());
    }
    rep.detail = json!({"cases": reports});
    rep
}

pub fn forms_ratio(max_gen: u32) -> Report {
    let mut rep = Report::new("forms-ratio");
    let far = [(GroupElement::identity(), w("T^2 S")), (w("U"), w("T^-1 S T^-2"))];
    for (x, y) in &far {
        rep.check(!adjacent(x, y, max_gen + 1), || json!({"reason": "pair is adjacent", "x": name(x), "y": name(y)}));
    }
    let rr = ratio_report(max_gen, &far);
    let ratio = rr.ratio.as_ref().map(format_rat);
    rep.check(rr.ratio.is_some(), || json!({"reason": "gamma/omega is not constant"}));
    rep.check(rr.magnitude_four, || json!({"reason": "|gamma/omega| != 4", "measured": ratio}));
    for p in &rr.non_adjacent {
        rep.check(p.gamma.is_zero() && p.omega.is_zero(), || json!({"x": name(&p.x), "y": name(&p.y)}));
    }
    let mags = |f: &dyn Fn(&ppsl2::forms::PairValue) -> Rat| {
        let mut v: Vec<String> = rr.pairs.iter().map(|p| format_rat(&f(p).abs())).collect();
        v.sort();
        v.dedup();
        v
    };
    rep.detail = json!({
        "max_gen": max_gen,
        "pairs": rr.pairs.len(),
        "ratio": ratio,
        "abs_gamma": mags(&|p| p.gamma.clone()),
        "abs_omega": mags(&|p| p.omega.clone()),
    });
    rep
}

pub fn kk(pairs: usize, m_max: u32) -> Report {
    let mut rep = Report::new("kk");
    let a = Complex64::new(0.0, 2.0 * PI);
    let fr = Framing::standard();
    let chosen: Vec<_> = adjacent_pairs(3).into_iter().take(pairs).collect();
    let rows: Vec<(String, String, f64, f64, f64)> = chosen
        .par_iter()
        .map(|(x, y)| {
            let omega = pair_value(x, y, 4).omega.to_f64().unwrap_or(f64::NAN);
            let (k, tail) = kk_form(&normalized_wavelet(x, &fr), &normalized_wavelet(y, &fr), a, m_max);
            (name(x), name(y), omega, (k / omega - 1.0).norm(), tail)
        })
        .collect();
    rep.check(rows.len() == pairs, || json!({"reason": "not enough adjacent pairs"}));
    let mut out = Vec::new();
    for (x, y, omega, err, tail) in rows {
        rep.check(err <= 1e-3, || json!({"x": x, "y": y, "rel_err": fmt_f64(err)}));
        out.push(json!({"x": x, "y": y, "omega": fmt_f64(omega), "rel_err": fmt_f64(err), "tail": fmt_f64(tail)}));
    }
    rep.detail = json!({"m": m_max, "pairs": out});
    rep
}

pub fn fourier(fields: usize, nmax: i64, seed: u64) -> Report {
    let mut rep = Report::new("fourier");
    let id = GroupElement::identity();
    let m = mother_wavelet();
    let mut mother_err = 0.0f64;
    for n in (-4 * nmax..=4 * nmax).filter(|n| n.abs() > 1) {
        let nf = n as f64;
        let want = if n.rem_euclid(4) == 2 { 8.0 / (PI * Complex64::i() * (nf * nf * nf - nf)) } else { Complex64::zero() };
        let err = (wavelet_fourier(&id, n) - want).norm().max((quadrature_oracle(&m, n) - want).norm());
        mother_err = mother_err.max(err);
        rep.check(err < 1e-12, || json!({"mother": true, "n": n, "err": fmt_f64(err)}));
    }
    let mut r = rng(seed);
    let elements: Vec<(bool, GroupElement)> = (0..fields).map(|k| (k % 2 == 0, random_element(&mut r, 9))).collect();
    let results: Vec<(f64, i64)> = elements
        .par_iter()
        .map(|(is_wavelet, a)| {
            let f = if *is_wavelet { normalized_wavelet(a, &Framing::standard()) } else { hyperfan(a) };
            let modes: Vec<i64> = (-nmax..=nmax).filter(|n| !*is_wavelet || n.abs() > 1).collect();
            let oracle: Vec<Complex64> = modes.iter().map(|n| quadrature_oracle(&f, *n)).collect();
            let scale = oracle.iter().map(|c| c.norm()).fold(0.0, f64::max);
            let mut worst = (0.0, 0);
            for (n, o) in modes.iter().zip(&oracle) {
                let c = if *is_wavelet { wavelet_fourier(a, *n) } else { hyperfan_fourier(a, *n) };
                let rel = (c - o).norm() / scale;
                if rel > worst.0 {
                    worst = (rel, *n);
                }
            }
            worst
        })
        .collect();
    let mut worst = 0.0f64;
    for ((is_wavelet, a), (rel, n)) in elements.iter().zip(results) {
        worst = worst.max(rel);
        rep.check(rel <= 1e-9, || json!({"wavelet": is_wavelet, "word": name(a), "n": n, "rel_err": fmt_f64(rel)}));
    }
    rep.detail = json!({"seed": seed, "fields": fields, "nmax": nmax, "mother_max_err": fmt_f64(mother_err), "closed_form_max_rel_err": fmt_f64(worst)});
    rep
}

fn max_error(partial: &PiecewiseField, lim: &PiecewiseField, angles: &[f64]) -> f64 {
    angles.iter().map(|t| (partial.evaluate_angle(*t) - lim.evaluate_angle(*t)).abs()).fold(0.0, f64::max)
}

pub fn telescoping(n: u32) -> Report {
    let mut rep = Report::new("telescoping");
    let angles = sample_angles(20);
    let (z, two) = (Sl2::zero(), int(2));
    let fan = PiecewiseField::quadrants([Sl2::e().scale(&-two.clone()), Sl2::h().sub(&Sl2::f()).scale(&two), z.clone(), z.clone()]);
    let m2e = Sl2::e().scale(&int(-2));
    let hyp = PiecewiseField::quadrants([m2e.clone(), m2e, z.clone(), z]);
    let e_fan = max_error(&fan_partial_sum(&w("U"), n), &fan, &angles);
    let e_hyp = max_error(&hyperfan_partial_sum(&GroupElement::identity(), n), &hyp, &angles);
    rep.check(e_fan <= 1e-6, || json!({"limit": "fan U", "err": fmt_f64(e_fan)}));
    rep.check(e_hyp <= 1e-6, || json!({"limit": "hyperfan I", "err": fmt_f64(e_hyp)}));
    rep.detail = json!({"n": n, "samples": angles.len(), "fan_err": fmt_f64(e_fan), "hyperfan_err": fmt_f64(e_hyp)});
    rep
}

pub fn eisenstein(n: usize, h: f64, seed: u64) -> Report {
    let mut rep = Report::new("eisenstein");
    let i = Complex64::i();
    let e2i = (e2_eval(i, n).0 - 3.0 / PI).norm();
    rep.check(e2i <= 1e-12, || json!({"check": "E2(i)", "err": fmt_f64(e2i)}));
    let q = Complex64::new(1.0, 2.0);
    let rhs = q * q * e2_corrected(q, n);
    let wt = (e2_corrected(-q.inv(), n) - rhs).norm() / rhs.norm();
    rep.check(wt <= 1e-10, || json!({"check": "weight 2", "rel_err": fmt_f64(wt)}));
    let phi = e2_lift(n);
    let st = Stencil { phi: &phi, h };
    let mut r = rng(seed);
    let (mut ef, mut eh, mut ec) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..20 {
        let g = GroupPoint::new(r.gen_range(-0.5..0.5), r.gen_range(0.8..3.0), r.gen_range(0.0..2.0 * PI));
        let (f, hh, c) = ((st.f_op(&g) - 3.0 / PI).norm(), (st.h_op(&g) - 2.0 * phi(&g)).norm(), st.casimir(&g).norm());
        rep.check(f <= 1e-4 && hh <= 1e-5 && c <= 1e-4, || json!({"point": [g.x, g.y, g.theta], "F": fmt_f64(f), "H": fmt_f64(hh), "casimir": fmt_f64(c)}));
        (ef, eh, ec) = (ef.max(f), eh.max(hh), ec.max(c));
    }
    rep.detail = json!({
        "n": n, "h": h, "seed": seed,
        "e2_at_i_err": fmt_f64(e2i), "weight_two_rel_err": fmt_f64(wt),
        "f_err": fmt_f64(ef), "h_err": fmt_f64(eh), "casimir": fmt_f64(ec),
    });
    rep
}

pub fn polygon_relations(max_n: usize) -> Report {
    let mut rep = Report::new("polygon-relations");
    let mut reverse_twenty = 0usize;
    for n in 4..=max_n {
        let t = TriangulatedPolygon::fan(n);
        let diags: Vec<(usize, usize)> = t.diagonals.iter().cloned().collect();
        for d in &diags {
            let plain = t.face_order(*d, 20).ok().flatten();
            let doe = t.clone().with_doe(*d).face_order(*d, 20).ok().flatten();
            rep.check(plain == Some(2) && doe == Some(4), || json!({"n": n, "diagonal": d, "orders": [plain, doe]}));
        }
        for (i, d1) in diags.iter().enumerate() {
            for (j, d2) in diags.iter().enumerate() {
                let adjacent = t.triangles().iter().any(|tri| [d1, d2].iter().all(|d| tri.contains(&d.0) && tri.contains(&d.1)));
                if i == j || !adjacent {
                    continue;
                }
                let plain = t.pentagon_order(*d1, *d2, 30).ok().flatten();
                rep.check(plain == Some(5), || json!({"n": n, "pentagon": [d1, d2], "order": plain}));
                // the reverse traversal closes after twenty steps
                let want = if d1.1 < d2.1 { 10 } else { 20 };
                let got = t.clone().with_doe(*d1).pentagon_order(*d1, *d2, 30).ok().flatten();
                rep.check(got == Some(want), || json!({"n": n, "pentagon with doe": [d1, d2], "order": got}));
                reverse_twenty += usize::from(want == 20);
            }
        }
    }
    rep.detail = json!({"max_n": max_n, "orders": [2, 4, 5, 10], "reverse_traversals_of_order_20": reverse_twenty});
    rep
}

pub fn tess_roundtrip(max_gen: u32, samples: usize, seed: u64) -> Report {
    let mut rep = Report::new("tess-roundtrip");
    match build_tessellation(&unit_lambdas(max_gen), max_gen) {
        Ok(t) => {
            rep.check(t.vertices.len() == farey_points(max_gen).len(), || json!({"reason": "vertex count"}));
            for (x, v) in &t.vertices {
                let q = Rat::from_integer(x.q().clone());
                let want = if x.is_infinity() { Rat::from_integer(1.into()) } else { (&q * &q).recip() };
                rep.check(&v.s == x && v.delta == want, || json!({"vertex": x.to_string(), "delta": format_rat(&v.delta)}));
            }
        }
        Err(e) => rep.check(false, || json!({"build": e.to_string()})),
    }
    let mut r = rng(seed);
    for _ in 0..samples {
        let g = r.gen_range(1..5);
        let l: BTreeMap<GroupElement, Rat> = farey_edges(g)
            .into_iter()
            .map(|a| {
                let x = rat(r.gen_range(1..12), r.gen_range(1..12));
                (a, &x * &x)
            })
            .collect();
        let ok = build_tessellation(&l, g).is_ok_and(|t| {
            let json = t.to_json().to_string();
            t.read_lambdas().ok().as_ref() == Some(&l)
                && DecoratedTessellationTruncation::from_json_str(&json).ok().as_ref() == Some(&t)
        });
        rep.check(ok, || json!({"g": g, "lambda_sq": l.iter().map(|(a, v)| (name(a), format_rat(v))).collect::<BTreeMap<_, _>>()}));
    }
    rep.detail = json!({"max_gen": max_gen, "samples": samples, "seed": seed});
    rep
}

pub fn basis(samples: usize, seed: u64) -> Report {
    let mut rep = Report::new("basis");
    let labels = farey_edges(4);
    let mut r = rng(seed);
    for _ in 0..samples {
        let mut e = BasisExpansion::new();
        for _ in 0..r.gen_range(1..6) {
            e.add_term(&labels[r.gen_range(0..labels.len())], &rat(r.gen_range(-9..10), r.gen_range(1..5)));
        }
        let got = expand_in_basis(&e.materialize());
        rep.check(got.as_ref().ok() == Some(&e), || e.to_json());
    }
    let rows = sl2_from_hyperfans();
    for (k, x) in [Sl2::h(), Sl2::e(), Sl2::f()].into_iter().enumerate() {
        let global = PiecewiseField::global(x.clone());
        let back = expand_in_basis(&global).map(|e| absorb_global(&e));
        let ok = rows[k].materialize() == global && back.as_ref().ok() == Some(&rows[k]);
        let row = ["h", "e", "f"][k];
        rep.check(ok, || json!({"row": row}));
    }
    rep.detail = json!({"samples": samples, "seed": seed, "inverse_rows": rows.iter().map(BasisExpansion::to_json).collect::<Vec<Value>>()});
    rep
}

/// Geometry round-trips and the polygon relations together.
pub fn geometry(max_gen: u32, samples: usize, seed: u64, max_n: usize) -> Report {
    let (a, b) = (tess_roundtrip(max_gen, samples, seed), polygon_relations(max_n));
    let mut rep = Report::new("geometry");
    rep.checked = a.checked + b.checked;
    rep.passed = a.passed && b.passed;
    rep.failure = a.failure.clone().or_else(|| b.failure.clone());
    rep.detail = json!({"tess-roundtrip": a.detail, "polygon-relations": b.detail});
    rep
}
