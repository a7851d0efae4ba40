//! The earthquake family `Λ(s)`, wavelets, hyperfans, the USA identity, the
//! hyperfan basis and the bracket `[ψ_I, ψ_A]` in closed form.

use std::collections::BTreeMap;

use num::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fields::{FieldError, PiecewiseField, Sl2, Sl2Json};
use crate::linalg;
use crate::modular::{
    basis_label, edge_endpoints, farey_edges, in_ccw_arc, matrix_to_word, ExtendedRational, Framing, GroupElement,
    GroupWord, Mat2, ModularError, Rat,
};
use crate::{int, rat};

#[derive(Debug, Error)]
pub enum WaveletError {
    #[error("USA combination for {0} is not global")]
    NotGlobal(String),
    #[error("no exact expansion up to generation {0}")]
    NoExpansion(u32),
    #[error("label {0} is not in the basis set")]
    NotInBasis(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Modular(#[from] ModularError),
    #[error("bad expansion json: {0}")]
    Json(String),
}

/// Entries `x·s + y/s` of the four pieces of `Λ(s)`, quadrants I to IV.
const LAMBDA: [[(i64, i64); 4]; 4] = [
    [(1, 0), (1, -1), (0, 0), (0, 1)],
    [(0, 1), (0, 0), (1, -1), (1, 0)],
    [(0, 1), (0, 0), (-1, 1), (1, 0)],
    [(1, 0), (-1, 1), (0, 0), (0, 1)],
];

/// The four quadrant matrices of `Λ(s)`, acting on the left.
pub fn lambda_family(s: &Rat) -> [Mat2; 4] {
    LAMBDA.map(|m| {
        let [a, b, c, d] = m.map(|(x, y)| int(x) * s + int(y) / s);
        Mat2::new(a, b, c, d)
    })
}

/// `d/ds Λ(s)` at `s = 1`, piece by piece.
pub fn lambda_derivative_at_one() -> [Sl2; 4] {
    LAMBDA.map(|m| {
        let [a, b, c, d] = m.map(|(x, y)| int(x - y));
        Sl2::from_entries(a, b, c, d).expect("traceless derivative")
    })
}

/// Value and derivative of `x ↦ M x` (left Möbius action) at a finite point.
pub fn left_mobius_jet(m: &Mat2, x: &Rat) -> (Rat, Rat) {
    let den = &m.c * x + &m.d;
    ((&m.a * x + &m.b) / &den, m.det() / (&den * &den))
}

pub fn mother_wavelet() -> PiecewiseField {
    let (h, e, f) = (Sl2::h(), Sl2::e(), Sl2::f());
    let two = int(2);
    PiecewiseField::quadrants([
        h.add(&e.scale(&two)),
        h.neg().add(&f.scale(&two)),
        h.neg().sub(&f.scale(&two)),
        h.sub(&e.scale(&two)),
    ])
}

/// `ϑ_A`: the mother wavelet carried to the edge `e_A`.
pub fn wavelet(a: &GroupElement) -> PiecewiseField {
    mother_wavelet().conjugate(&a.to_mat2())
}

pub fn normalized_wavelet(a: &GroupElement, framing: &Framing) -> PiecewiseField {
    wavelet(a).normalize(framing).expect("distinct framing points").0
}

/// `ψ_A`: value `A⁻¹eA` on the ccw arc from `−d/c` to `−b/a`, zero elsewhere.
pub fn hyperfan(a: &GroupElement) -> PiecewiseField {
    let (init, term) = edge_endpoints(a);
    let (c, d) = (Rat::from_integer(a.c().clone()), Rat::from_integer(a.d().clone()));
    let v = Sl2::new(&c * &d, &d * &d, -(&c * &c));
    PiecewiseField::arc(&term, &init, v, Sl2::zero())
}

/// `A⁻¹ f A`.
pub fn conj_f(a: &GroupElement) -> Sl2 {
    Sl2::f().conj(&a.to_mat2())
}

fn word(s: &str) -> GroupElement {
    s.parse::<GroupWord>().expect("constant word").to_matrix()
}

/// `ψ_I + ψ_{US} − ψ_S − ψ_{U⁻¹} − f`.
pub fn hyperfan_h_combination() -> PiecewiseField {
    let one = Rat::one();
    PiecewiseField::linear_combination(&[
        (one.clone(), &hyperfan(&GroupElement::identity())),
        (one.clone(), &hyperfan(&word("US"))),
        (-&one, &hyperfan(&word("S"))),
        (-&one, &hyperfan(&word("U^-1"))),
        (-&one, &PiecewiseField::global(Sl2::f())),
    ])
}

/// The six labels and coefficients of `Ψ_A`.
pub fn usa_terms(a: &GroupElement) -> Vec<(GroupElement, i64)> {
    let (s, t, u) = (GroupElement::s(), GroupElement::t(), GroupElement::u());
    vec![
        (s.mul(&t).mul(a), 1),
        (s.mul(a), -2),
        (s.mul(&t.inv()).mul(a), 1),
        (u.mul(a), -1),
        (a.clone(), 2),
        (u.inv().mul(a), -1),
    ]
}

/// `Ψ_A` computed from hyperfans; must be global.
pub fn usa_deficiency(a: &GroupElement) -> Result<Sl2, WaveletError> {
    let fields: Vec<(Rat, PiecewiseField)> = usa_terms(a).iter().map(|(b, k)| (int(*k), hyperfan(b))).collect();
    let refs: Vec<(Rat, &PiecewiseField)> = fields.iter().map(|(k, f)| (k.clone(), f)).collect();
    match PiecewiseField::linear_combination(&refs) {
        PiecewiseField::Global(x) => Ok(x),
        _ => Err(WaveletError::NotGlobal(a.to_string())),
    }
}

/// `{c(d+b)+a(d−b)}h + (d²−b²+2bd)e + (a²−c²−2ac)f`.
pub fn usa_closed_form(m: &GroupElement) -> Sl2 {
    let [a, b, c, d] = m.entries().map(Rat::from_integer);
    let two = int(2);
    Sl2::hef(
        &c * (&d + &b) + &a * (&d - &b),
        &d * &d - &b * &b + &two * &b * &d,
        &a * &a - &c * &c - &two * &a * &c,
    )
}

/// A finite combination `Σ c_A ψ_A + X` with `X` global.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BasisExpansion {
    pub terms: BTreeMap<GroupElement, Rat>,
    pub global: Sl2,
}

impl BasisExpansion {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn hyperfan(a: &GroupElement) -> Self {
        let mut e = Self::new();
        e.add_term(a, &Rat::one());
        e
    }

    pub fn global(x: Sl2) -> Self {
        BasisExpansion { terms: BTreeMap::new(), global: x }
    }

    pub fn add_term(&mut self, a: &GroupElement, k: &Rat) {
        let v = self.terms.entry(a.clone()).or_insert_with(Rat::zero);
        *v += k;
        if v.is_zero() {
            self.terms.remove(a);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (a, k) in &o.terms {
            r.add_term(a, k);
        }
        r.global = r.global.add(&o.global);
        r
    }

    pub fn scale(&self, k: &Rat) -> Self {
        let mut r = Self::global(self.global.scale(k));
        for (a, c) in &self.terms {
            r.add_term(a, &(c * k));
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Rat::one()))
    }

    /// Conjugation by `B`: `ψ_A ↦ ψ_{AB}`, `X ↦ B⁻¹XB`.
    pub fn conjugate(&self, b: &GroupElement) -> Self {
        let mut r = Self::global(self.global.conj(&b.to_mat2()));
        for (a, c) in &self.terms {
            r.add_term(&a.mul(b), c);
        }
        r
    }

    pub fn materialize(&self) -> PiecewiseField {
        let fields: Vec<(Rat, PiecewiseField)> = self.terms.iter().map(|(a, k)| (k.clone(), hyperfan(a))).collect();
        let g = PiecewiseField::global(self.global.clone());
        let mut refs: Vec<(Rat, &PiecewiseField)> = fields.iter().map(|(k, f)| (k.clone(), f)).collect();
        refs.push((Rat::one(), &g));
        PiecewiseField::linear_combination(&refs)
    }

    pub fn in_basis(&self) -> bool {
        self.terms.keys().all(crate::modular::in_basis)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let j = ExpansionJson {
            terms: self
                .terms
                .iter()
                .map(|(a, k)| TermJson { word: matrix_to_word(a).to_string(), coef: crate::modular::format_rat(k) })
                .collect(),
            global: Sl2Json::from(&self.global),
        };
        serde_json::to_value(j).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Self, WaveletError> {
        let j: ExpansionJson = serde_json::from_str(s).map_err(|e| WaveletError::Json(e.to_string()))?;
        let mut r = Self::global(j.global.to_sl2()?);
        for t in j.terms {
            let w: GroupWord = t.word.parse()?;
            r.add_term(&w.to_matrix(), &crate::modular::parse_rat(&t.coef)?);
        }
        Ok(r)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpansionJson {
    terms: Vec<TermJson>,
    global: Sl2Json,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    word: String,
    coef: String,
}

/// `Ψ_A` as a hyperfan combination.
pub fn usa_expansion(a: &GroupElement) -> BasisExpansion {
    let mut r = BasisExpansion::new();
    for (b, k) in usa_terms(a) {
        r.add_term(&b, &int(k));
    }
    r
}

/// `(h, e, f)` through `(Ψ_I, Ψ_T, Ψ_{U⁻¹})` and the inverse matrix
/// `⅓[[3,−1,−1],[0,2,−1],[0,−1,2]]`.
pub fn sl2_from_hyperfans() -> [BasisExpansion; 3] {
    let psi = [GroupElement::identity(), GroupElement::t(), GroupElement::u().inv()].map(|a| usa_expansion(&a));
    let rows = [[3, -1, -1], [0, 2, -1], [0, -1, 2]];
    rows.map(|row| {
        row.iter().zip(&psi).fold(BasisExpansion::new(), |acc, (k, p)| acc.add(&p.scale(&rat(*k, 3))))
    })
}

/// Matrix of `x ↦ A⁻¹xA` on coordinate columns `(e, f, h)`.
pub fn adjoint_matrix(m: &GroupElement) -> Vec<Vec<Rat>> {
    let [a, b, c, d] = m.entries().map(Rat::from_integer);
    let two = int(2);
    vec![
        vec![&d * &d, -(&b * &b), &two * &b * &d],
        vec![-(&c * &c), &a * &a, -(&two * &a * &c)],
        vec![&c * &d, -(&a * &b), &a * &d + &b * &c],
    ]
}

/// `(e, f, h)` coordinates.
pub fn efh(x: &Sl2) -> Vec<Rat> {
    vec![x.beta.clone(), x.gamma.clone(), x.alpha.clone()]
}

/// The endpoint-order case of `e_A` relative to the doe (0 when `c = 0`).
pub fn bracket_case(m: &GroupElement) -> u8 {
    if m.c().is_zero() {
        return 0;
    }
    let (x0, x1) = edge_endpoints(m);
    let zero = ExtendedRational::zero();
    if x0.is_infinity() {
        return if x1 >= zero { 1 } else { 4 };
    }
    if x0 >= zero && x1 >= zero {
        if x1 < x0 {
            1
        } else {
            2
        }
    } else if x1 < x0 {
        3
    } else {
        4
    }
}

/// `μ`: the part of the bracket carried by quadrants I and II.
fn mu(c: &Rat, d: &Rat) -> BasisExpansion {
    let c2 = c * c;
    let mut r = BasisExpansion::global(Sl2::f().scale(&c2));
    r.add_term(&GroupElement::identity(), &(-(c * (int(2) * d + c))));
    r.add_term(&word("S"), &c2);
    r.add_term(&word("U^-1"), &c2);
    r.add_term(&word("US"), &-c2);
    r
}

/// `[ψ_I, ψ_A]` as a hyperfan combination, with its case tag.
pub fn bracket_structure(m: &GroupElement) -> (u8, BasisExpansion) {
    let case = bracket_case(m);
    let [a, _b, c, d] = m.entries().map(Rat::from_integer);
    let c2 = &c * &c;
    let (s, u) = (GroupElement::s(), GroupElement::u());
    let sa = s.mul(m);
    let out = match case {
        0 | 1 => BasisExpansion::new(),
        2 => mu(&c, &d),
        3 => {
            let mut r = BasisExpansion::global(conj_f(m).scale(&-c2.clone()));
            r.add_term(m, &(&c * (&c - int(2) * &a)));
            r.add_term(&u.mul(&sa), &c2);
            r.add_term(&sa, &-c2.clone());
            r.add_term(&u.inv().mul(m), &-c2);
            r
        }
        _ => {
            let two_ac = int(2) * &a * &c;
            let fsa = conj_f(&sa);
            let mut nu = BasisExpansion::global(fsa.scale(&(&two_ac + &c2)));
            nu.add_term(m, &(&two_ac + &c2));
            nu.add_term(&sa, &-c2.clone());
            nu.add_term(&u.mul(m), &-c2.clone());
            nu.add_term(&u.inv().mul(&sa), &c2);
            mu(&c, &d).sub(&nu)
        }
    };
    (case, out)
}

/// The bracket formula exactly as printed (used to document its misprints).
pub fn bracket_structure_as_printed(m: &GroupElement) -> BasisExpansion {
    let [a, b, c, d] = m.entries().map(Rat::from_integer);
    let c2 = &c * &c;
    let (s, u) = (GroupElement::s(), GroupElement::u());
    let sa = s.mul(m);
    let k1 = int(2) * &a * &c * (&a * &d + &b * &c);
    let k2 = int(4) * &c2 * &c * &d;
    let k3 = &c2 * (int(3) * &a * &d + &b * &c);
    let mu = || {
        let mut r = BasisExpansion::global(Sl2::f().scale(&c2));
        r.add_term(&GroupElement::identity(), &(&c * (int(2) * &d - &c)));
        r.add_term(&word("S"), &c2);
        r.add_term(&word("U^-1"), &c2);
        r.add_term(&word("US"), &-c2.clone());
        r
    };
    match bracket_case(m) {
        0 | 1 => BasisExpansion::new(),
        2 => mu(),
        3 => {
            let fa = conj_f(m);
            let mut r = BasisExpansion::global(fa.scale(&(&k3 - &k2)));
            r.add_term(m, &(&k1 - &k3));
            r.add_term(&sa, &(&k3 - &k2));
            r.add_term(&u.mul(&sa), &-k3.clone());
            r.add_term(&u.inv(), &k3);
            r
        }
        _ => {
            let fsa = conj_f(&sa);
            let mut r = mu().add(&BasisExpansion::global(fsa.scale(&(&k1 + &k3))));
            r.add_term(&sa, &(-(&k2) - &k3));
            r.add_term(m, &(&k1 + &k3));
            r.add_term(&u.mul(m), &-k3.clone());
            r.add_term(&u.inv().mul(&sa), &k3);
            r
        }
    }
}

/// `[ψ_B, ψ_A] = B⁻¹[ψ_I, ψ_{AB⁻¹}]B`.
pub fn bracket_general(b: &GroupElement, a: &GroupElement) -> BasisExpansion {
    bracket_structure(&a.mul(&b.inv())).1.conjugate(b)
}

/// `Σ_{n=0}^{N} ϑ̄_{UⁿA}` for the standard framing.
pub fn fan_partial_sum(a: &GroupElement, n: u32) -> PiecewiseField {
    weighted_fan(a, n, |_| Rat::one())
}

/// `Σ_{n=0}^{N} n·ϑ̄_{UⁿA}`.
pub fn hyperfan_partial_sum(a: &GroupElement, n: u32) -> PiecewiseField {
    weighted_fan(a, n, |k| int(k as i64))
}

/// `Σ_{n=0}^{N} (−n)·ϑ̄_{U⁻ⁿA}`, the truncated right hyperfan.
pub fn right_hyperfan_partial_sum(a: &GroupElement, n: u32) -> PiecewiseField {
    let framing = Framing::standard();
    let ui = GroupElement::u().inv();
    let mut acc = PiecewiseField::zero();
    let mut cur = a.clone();
    for k in 0..=n {
        if k > 0 {
            acc = acc.add(&normalized_wavelet(&cur, &framing).scale(&int(-(k as i64))));
        }
        cur = ui.mul(&cur);
    }
    acc
}

fn weighted_fan(a: &GroupElement, n: u32, w: impl Fn(u32) -> Rat) -> PiecewiseField {
    let framing = Framing::standard();
    let u = GroupElement::u();
    let mut acc = PiecewiseField::zero();
    let mut cur = a.clone();
    for k in 0..=n {
        let wk = w(k);
        if !wk.is_zero() {
            acc = acc.add(&normalized_wavelet(&cur, &framing).scale(&wk));
        }
        cur = u.mul(&cur);
    }
    acc
}

/// Basis labels (doe plus lower-to-higher orientations) of all edges with
/// endpoints of generation at most `g`.
pub fn basis_labels(g: u32) -> Vec<GroupElement> {
    farey_edges(g)
}

/// Exact expansion `f = Σ c_A ψ_A + X` over basis labels, by a dense solve.
pub fn expand_in_basis(f: &PiecewiseField) -> Result<BasisExpansion, WaveletError> {
    let g = f.max_generation();
    for depth in (g + 1)..=(g + 3) {
        if let Some(e) = expand_at_depth(f, depth) {
            debug_assert_eq!(&e.materialize(), f);
            return Ok(e);
        }
    }
    Err(WaveletError::NoExpansion(g + 3))
}

fn expand_at_depth(f: &PiecewiseField, depth: u32) -> Option<BasisExpansion> {
    let labels = basis_labels(depth);
    let fans: Vec<PiecewiseField> = labels.iter().map(hyperfan).collect();
    let mut pts = crate::modular::farey_points(depth);
    pts.extend(f.breakpoints());
    pts.sort();
    pts.dedup();
    let n = labels.len() + 3;
    let mut rows = Vec::with_capacity(3 * pts.len());
    let mut rhs = Vec::with_capacity(3 * pts.len());
    let comps = |x: &Sl2| [x.alpha.clone(), x.beta.clone(), x.gamma.clone()];
    for p in &pts {
        let cols: Vec<[Rat; 3]> = fans.iter().map(|fan| comps(fan.value_after(p))).collect();
        let target = comps(f.value_after(p));
        for k in 0..3 {
            let mut row: Vec<Rat> = cols.iter().map(|c| c[k].clone()).collect();
            row.extend((0..3).map(|j| if j == k { Rat::one() } else { Rat::zero() }));
            debug_assert_eq!(row.len(), n);
            rows.push(row);
            rhs.push(target[k].clone());
        }
    }
    let x = linalg::solve(rows, rhs).any()?;
    let mut e = BasisExpansion::global(Sl2::new(x[n - 3].clone(), x[n - 2].clone(), x[n - 1].clone()));
    for (a, k) in labels.iter().zip(&x) {
        e.add_term(a, k);
    }
    (e.materialize() == *f).then_some(e)
}

/// Rewrites the global part of an expansion through `sl2_from_hyperfans`.
pub fn absorb_global(e: &BasisExpansion) -> BasisExpansion {
    let [h, ee, f] = sl2_from_hyperfans();
    let g = &e.global;
    let mut r = BasisExpansion { terms: e.terms.clone(), global: Sl2::zero() };
    r = r.add(&h.scale(&g.alpha)).add(&ee.scale(&g.beta)).add(&f.scale(&g.gamma));
    r
}

/// Whether `x` lies on the open support arc of `ψ_A`.
pub fn in_hyperfan_support(a: &GroupElement, x: &ExtendedRational) -> bool {
    let (init, term) = edge_endpoints(a);
    in_ccw_arc(&term, &init, x)
}

/// Basis label for the unoriented Farey edge through two points.
pub fn label_of(x: &ExtendedRational, y: &ExtendedRational) -> Result<GroupElement, WaveletError> {
    Ok(basis_label(x, y)?)
}
