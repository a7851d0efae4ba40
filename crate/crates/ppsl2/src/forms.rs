//! The loop-algebra cocycle, the Weil–Petersson form on lambda-length
//! tangents and the Kirillov–Kostant form on Fourier modes.

use std::collections::BTreeMap;

use num::complex::Complex64;
use num::{One, Zero};
use serde_json::json;

use crate::fields::PiecewiseField;
use crate::harmonic;
use crate::modular::{edge_endpoints, farey_triangles, format_rat, matrix_to_word, basis_label, ExtendedRational, GroupElement, Rat};
use crate::wavelets::normalized_wavelet;
use crate::Framing;

/// `γ(f, g) = ½ Σ_{θ∈Π(g)} tr{[f(θ⁺)+f(θ⁻)][g(θ⁺)−g(θ⁻)]}`.
pub fn la_cocycle(f: &PiecewiseField, g: &PiecewiseField) -> Rat {
    let two = crate::int(2);
    g.breakpoints()
        .iter()
        .map(|b| {
            let fs = f.value_after(b).add(f.value_before(b));
            let gj = g.value_after(b).sub(g.value_before(b));
            fs.trace_form(&gj)
        })
        .fold(Rat::zero(), |acc, x| acc + x)
        / two
}

/// A finite-support tangent in `d log λ` coordinates, keyed by basis label.
pub type EdgeTangent = BTreeMap<GroupElement, Rat>;

pub fn unit_tangent(a: &GroupElement) -> EdgeTangent {
    let mut t = EdgeTangent::new();
    t.insert(a.clone(), Rat::one());
    t
}

/// The tangent matched to `ϑ̄_A`: the derivative at `s = 1` of the
/// earthquake family of `e_A`, which is `2 ∂/∂log λ_A`.
pub fn matched_tangent(a: &GroupElement) -> EdgeTangent {
    let mut t = EdgeTangent::new();
    t.insert(a.clone(), crate::int(2));
    t
}

fn edge_key(x: &ExtendedRational, y: &ExtendedRational) -> GroupElement {
    basis_label(x, y).expect("Farey neighbours")
}

/// `ω = −2 Σ_triangles (da∧db + db∧dc + dc∧da)` with `a, b, c` the sides in
/// clockwise order, at the all-ones decoration.
pub fn wp_form(t1: &EdgeTangent, t2: &EdgeTangent, g: u32) -> Rat {
    let get = |t: &EdgeTangent, k: &GroupElement| t.get(k).cloned().unwrap_or_else(Rat::zero);
    let wedge = |x: &GroupElement, y: &GroupElement| get(t1, x) * get(t2, y) - get(t1, y) * get(t2, x);
    let mut total = Rat::zero();
    for [v0, v1, v2] in farey_triangles(g) {
        let a = edge_key(&v0, &v2);
        let b = edge_key(&v2, &v1);
        let c = edge_key(&v1, &v0);
        total += wedge(&a, &b) + wedge(&b, &c) + wedge(&c, &a);
    }
    crate::int(-2) * total
}

/// `κ_a(f, g) = Σ_{2≤|m|≤M} a(m³−m) c_m(f) c_{−m}(g)`, with the `O(1/M²)`
/// tail bound `Σ_{|m|>M} |a|·|m³−m|·C_f C_g/|m|⁶` from `|c_m| ≤ C/|m|³`.
pub fn kk_form(f: &PiecewiseField, g: &PiecewiseField, a: Complex64, m_max: u32) -> (Complex64, f64) {
    let mut total = Complex64::new(0.0, 0.0);
    let (mut cf_max, mut cg_max) = (0.0f64, 0.0f64);
    let mm = m_max as i64;
    for m in (-mm..=mm).filter(|m| m.abs() >= 2) {
        let cf = harmonic::quadrature_oracle(f, m);
        let cg = harmonic::quadrature_oracle(g, -m);
        let mf = m as f64;
        total += a * (mf * mf * mf - mf) * cf * cg;
        if m.abs() > mm / 2 {
            cf_max = cf_max.max(cf.norm() * mf.abs().powi(3));
            cg_max = cg_max.max(cg.norm() * mf.abs().powi(3));
        }
    }
    // Σ_{m>M} 1/m³ ≤ 1/(2M²), both signs
    let tail = a.norm() * cf_max * cg_max / (m_max as f64).powi(2);
    (total, tail)
}

/// `κ_a(L_m, L_n) = a(m³ − m) δ_{m,−n}` on Witt generators.
pub fn kk_witt(a: Complex64, m: i64, n: i64) -> Complex64 {
    if m + n != 0 || m.abs() < 2 {
        return Complex64::new(0.0, 0.0);
    }
    let mf = m as f64;
    a * (mf * mf * mf - mf)
}

/// Whether two distinct basis labels bound a common triangle to generation `g`.
pub fn adjacent(x: &GroupElement, y: &GroupElement, g: u32) -> bool {
    farey_triangles(g).iter().any(|[v0, v1, v2]| {
        let es = [edge_key(v0, v1), edge_key(v1, v2), edge_key(v0, v2)];
        x != y && es.contains(x) && es.contains(y)
    })
}

/// All unordered adjacent pairs of basis edges to generation `g`, in sides of
/// each triangle taken ccw.
pub fn adjacent_pairs(g: u32) -> Vec<(GroupElement, GroupElement)> {
    let mut out = Vec::new();
    for [v0, v1, v2] in farey_triangles(g) {
        let es = [edge_key(&v0, &v1), edge_key(&v1, &v2), edge_key(&v2, &v0)];
        for i in 0..3 {
            out.push((es[i].clone(), es[(i + 1) % 3].clone()));
        }
    }
    out.sort();
    out.dedup();
    out
}

#[derive(Clone, Debug)]
pub struct PairValue {
    pub x: GroupElement,
    pub y: GroupElement,
    pub gamma: Rat,
    pub omega: Rat,
}

#[derive(Clone, Debug)]
pub struct RatioReport {
    pub pairs: Vec<PairValue>,
    pub non_adjacent: Vec<PairValue>,
    /// The common value of `γ/ω` over adjacent pairs, if there is one.
    pub ratio: Option<Rat>,
    pub magnitude_four: bool,
}

/// `γ(ϑ̄_x, ϑ̄_y)` and `ω` on the matched tangents.
pub fn pair_value(x: &GroupElement, y: &GroupElement, g: u32) -> PairValue {
    let fr = Framing::standard();
    let gamma = la_cocycle(&normalized_wavelet(x, &fr), &normalized_wavelet(y, &fr));
    let omega = wp_form(&matched_tangent(x), &matched_tangent(y), g);
    PairValue { x: x.clone(), y: y.clone(), gamma, omega }
}

/// Adjacent pairs to generation `g`, plus the given non-adjacent pairs.
pub fn ratio_report(g: u32, non_adjacent: &[(GroupElement, GroupElement)]) -> RatioReport {
    let pairs: Vec<PairValue> = adjacent_pairs(g).iter().map(|(x, y)| pair_value(x, y, g)).collect();
    let ratios: Vec<Option<Rat>> =
        pairs.iter().map(|p| (!p.omega.is_zero()).then(|| &p.gamma / &p.omega)).collect();
    let ratio = match ratios.first() {
        Some(Some(r)) if ratios.iter().all(|x| x.as_ref() == Some(r)) => Some(r.clone()),
        _ => None,
    };
    let magnitude_four = ratio.as_ref().is_some_and(|r| num::Signed::abs(r) == crate::int(4));
    let non_adjacent = non_adjacent.iter().map(|(x, y)| pair_value(x, y, g + 1)).collect();
    RatioReport { pairs, non_adjacent, ratio, magnitude_four }
}

impl RatioReport {
    pub fn to_json(&self) -> serde_json::Value {
        let pv = |p: &PairValue| {
            json!({
                "x": matrix_to_word(&p.x).to_string(),
                "y": matrix_to_word(&p.y).to_string(),
                "x_endpoints": endpoints(&p.x),
                "y_endpoints": endpoints(&p.y),
                "gamma": format_rat(&p.gamma),
                "omega": format_rat(&p.omega),
            })
        };
        let first = self.pairs.first();
        json!({
            "schema": 1,
            "pairs": self.pairs.iter().map(pv).collect::<Vec<_>>(),
            "non_adjacent": self.non_adjacent.iter().map(pv).collect::<Vec<_>>(),
            "gamma": first.map(|p| format_rat(&p.gamma)),
            "omega": first.map(|p| format_rat(&p.omega)),
            "ratio": self.ratio.as_ref().map(format_rat),
            "convention": {
                "orientation": "ccw = increasing s; triangle sides taken clockwise in the disk",
                "tangent": "matched tangent = 2 d/dlog(lambda)",
                "magnitude_four": self.magnitude_four,
            }
        })
    }
}

fn endpoints(a: &GroupElement) -> [String; 2] {
    let (x, y) = edge_endpoints(a);
    [x.to_string(), y.to_string()]
}
