//! The `ppsl₂`-valued 1-form `ξ_F = Σ ϑ̄_e d log λ_e` on a truncation, and
//! its behaviour under a flip.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};
use serde_json::json;

use crate::fields::{PiecewiseField, Sl2};
use crate::forms::EdgeTangent;
use crate::modular::{
    edge_endpoints, farey_edges, farey_tessellation, format_rat, in_ccw_arc, ExtendedRational, FiniteTessellation,
    GroupElement, ModularError, Rat,
};
use crate::wavelets::normalized_wavelet;
use crate::{int, rat, Framing};

pub type Point = ExtendedRational;
/// An unoriented edge, endpoints sorted.
pub type EdgeKey = (Point, Point);

pub fn edge_key(x: &Point, y: &Point) -> EdgeKey {
    if x < y {
        (x.clone(), y.clone())
    } else {
        (y.clone(), x.clone())
    }
}

/// Unit hyperbolic generator fixing `p` and `q` (sign unspecified).
fn side_generator(p: &Point, q: &Point) -> Sl2 {
    match (p.to_rat(), q.to_rat()) {
        (None, Some(r)) | (Some(r), None) => Sl2::new(int(-1), int(2) * r, Rat::zero()),
        (Some(p), Some(q)) => {
            let k = int(2) / (&p - &q).abs();
            Sl2::new(&k * (&p + &q) / int(2), -&k * &p * &q, k)
        }
        (None, None) => unreachable!("distinct vertices"),
    }
}

/// A point strictly inside the ccw arc from `p` to `q`.
fn arc_midpoint(p: &Point, q: &Point) -> Point {
    match (p.to_rat(), q.to_rat()) {
        (None, Some(q)) => Point::from_rat(&(q - Rat::one())),
        (Some(p), None) => Point::from_rat(&(p + Rat::one())),
        (Some(p), Some(q)) if p < q => Point::from_rat(&((p + q) / int(2))),
        (Some(p), Some(_)) => Point::from_rat(&(p + Rat::one())),
        (None, None) => unreachable!("distinct vertices"),
    }
}

/// The wavelet of the diagonal `(u, v)` of an ideal quadrilateral with
/// vertices `verts` in ccw order: on each side, the unit hyperbolic flow
/// along that side running away from the diagonal endpoint.
pub fn wavelet_quad(verts: &[Point; 4], u: &Point, v: &Point) -> PiecewiseField {
    let pieces = (0..4)
        .map(|i| {
            let (p, q) = (&verts[i], &verts[(i + 1) % 4]);
            let x = side_generator(p, q);
            let ccw = x.scalar_at(&arc_midpoint(p, q)).is_positive();
            let from_start = p == u || p == v;
            (p.clone(), if ccw == from_start { x } else { x.neg() })
        })
        .collect();
    PiecewiseField::from_pieces(pieces).expect("four distinct vertices")
}

/// The two apexes of the triangles on either side of `(x, y)`, with the
/// quadrilateral in ccw order.
pub fn quadrilateral(t: &FiniteTessellation<Point>, x: &Point, y: &Point) -> Result<[Point; 4], ModularError> {
    if !t.has_edge(x, y) {
        return Err(ModularError::NotNeighbours(x.to_string(), y.to_string()));
    }
    let common: Vec<&Point> = t.vertices.iter().filter(|w| t.has_edge(x, w) && t.has_edge(w, y)).collect();
    let left: Vec<&Point> = common.iter().copied().filter(|w| in_ccw_arc(x, y, *w)).collect();
    let right: Vec<&Point> = common.iter().copied().filter(|w| in_ccw_arc(y, x, *w)).collect();
    let (l, r) = match (left.as_slice(), right.as_slice()) {
        ([l], [r]) => ((*l).clone(), (*r).clone()),
        _ => return Err(ModularError::MissingTriangle(x.to_string(), y.to_string())),
    };
    let mut v = [x.clone(), l, y.clone(), r];
    v.sort();
    Ok(v)
}

/// The wavelet of an interior edge of a finite triangulation.
pub fn edge_wavelet(t: &FiniteTessellation<Point>, x: &Point, y: &Point) -> Result<PiecewiseField, ModularError> {
    Ok(wavelet_quad(&quadrilateral(t, x, y)?, x, y))
}

/// Replace the diagonal `(x, y)` of its quadrilateral by the other one.
pub fn flip(t: &FiniteTessellation<Point>, x: &Point, y: &Point) -> Result<(FiniteTessellation<Point>, EdgeKey), ModularError> {
    let q = quadrilateral(t, x, y)?;
    let others: Vec<Point> = q.iter().filter(|w| *w != x && *w != y).cloned().collect();
    let mut edges = t.edges.clone();
    edges.remove(&edge_key(x, y));
    let f = edge_key(&others[0], &others[1]);
    edges.insert(f.clone());
    let doe = if edge_key(&t.doe.0, &t.doe.1) == edge_key(x, y) { (f.0.clone(), f.1.clone()) } else { t.doe.clone() };
    Ok((FiniteTessellation { vertices: t.vertices.clone(), edges, doe }, f))
}

/// A truncation of `ξ_F`: normalized wavelets of the edges, one per unoriented edge.
#[derive(Clone, Debug)]
pub struct OneFormTruncation {
    pub framing: Framing,
    pub g: u32,
    pub table: BTreeMap<EdgeKey, PiecewiseField>,
}

/// `ξ_F` on the Farey edges to generation `g`.
pub fn one_form(framing: &Framing, g: u32) -> OneFormTruncation {
    let table = farey_edges(g)
        .iter()
        .map(|a| {
            let (x, y) = edge_endpoints(a);
            (edge_key(&x, &y), normalized_wavelet(a, framing))
        })
        .collect();
    OneFormTruncation { framing: framing.clone(), g, table }
}

impl OneFormTruncation {
    /// The normalized wavelets of the given interior edges of `t`.
    pub fn of_tessellation(t: &FiniteTessellation<Point>, edges: &[EdgeKey], framing: &Framing, g: u32) -> Result<Self, ModularError> {
        let mut table = BTreeMap::new();
        for (x, y) in edges {
            let (f, _) = edge_wavelet(t, x, y)?.normalize(framing).map_err(|_| ModularError::Repeated)?;
            table.insert((x.clone(), y.clone()), f);
        }
        Ok(OneFormTruncation { framing: framing.clone(), g, table })
    }

    pub fn get(&self, x: &Point, y: &Point) -> Option<&PiecewiseField> {
        self.table.get(&edge_key(x, y))
    }

    /// `Σ t(e) ϑ̄_e` over edges keyed by endpoints.
    pub fn apply_pairs(&self, t: &BTreeMap<EdgeKey, Rat>) -> Option<PiecewiseField> {
        let mut terms = Vec::new();
        for (k, c) in t {
            terms.push((c.clone(), self.table.get(k)?));
        }
        Some(PiecewiseField::linear_combination(&terms))
    }

    /// `Σ t(e) ϑ̄_e`; `None` if the support leaves the truncation.
    pub fn apply(&self, t: &EdgeTangent) -> Option<PiecewiseField> {
        let pairs = t
            .iter()
            .map(|(a, c)| {
                let (x, y) = edge_endpoints(a);
                (edge_key(&x, &y), c.clone())
            })
            .collect();
        self.apply_pairs(&pairs)
    }
}

fn pt(n: i64, d: i64) -> Point {
    Point::from_rat(&rat(n, d))
}

/// Vertices of the quadrilateral around the doe and its neighbours.
pub struct Quad {
    pub a: EdgeKey,
    pub b: EdgeKey,
    pub c: EdgeKey,
    pub d: EdgeKey,
    pub e: EdgeKey,
}

pub fn doe_quad() -> Quad {
    let inf = Point::infinity();
    Quad {
        a: edge_key(&inf, &pt(-1, 1)),
        b: edge_key(&pt(-1, 1), &pt(0, 1)),
        c: edge_key(&pt(0, 1), &pt(1, 1)),
        d: edge_key(&pt(1, 1), &inf),
        e: edge_key(&pt(0, 1), &inf),
    }
}

/// The eight arcs `I₋, I₊, …, IV₊` cut out by the points of generation ≤ 2.
pub fn subarcs() -> Vec<(&'static str, Point, Point)> {
    let names = ["I-", "I+", "II-", "II+", "III-", "III+", "IV-", "IV+"];
    let p = [Point::infinity(), pt(-2, 1), pt(-1, 1), pt(-1, 2), pt(0, 1), pt(1, 2), pt(1, 1), pt(2, 1)];
    (0..8).map(|i| (names[i], p[i].clone(), p[(i + 1) % 8].clone())).collect()
}

/// The wavelets of `τ′` for `a, b, c, d, f`, normalized against `framing`.
pub fn flipped_wavelets_with(framing: &Framing) -> [PiecewiseField; 5] {
    let t = farey_tessellation(2, &GroupElement::identity());
    let q = doe_quad();
    let (tp, f) = flip(&t, &q.e.0, &q.e.1).expect("doe is interior");
    let form = OneFormTruncation::of_tessellation(&tp, &[q.a.clone(), q.b.clone(), q.c.clone(), q.d.clone(), f.clone()], framing, 2)
        .expect("interior edges");
    [&q.a, &q.b, &q.c, &q.d, &f].map(|k| form.table[k].clone())
}

pub fn flipped_wavelets() -> [PiecewiseField; 5] {
    flipped_wavelets_with(&Framing::standard())
}

/// `ϑ̄_a, …, ϑ̄_e` on `τ_*` normalized against `framing`.
pub fn unflipped_wavelets_with(framing: &Framing) -> [PiecewiseField; 5] {
    let t = farey_tessellation(2, &GroupElement::identity());
    let q = doe_quad();
    [&q.a, &q.b, &q.c, &q.d, &q.e].map(|(x, y)| edge_wavelet(&t, x, y).expect("interior").normalize(framing).expect("framing").0)
}

/// Which doe position the invariance is checked for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlipCase {
    /// The flip on the doe itself, normalized against the standard framing.
    Doe,
    /// The doe on one of the four quadrilateral sides, given by its label.
    Side(GroupElement),
}

impl FlipCase {
    pub fn all() -> Vec<FlipCase> {
        let w = |s: &str| s.parse::<crate::GroupWord>().expect("word").to_matrix();
        let mut v = vec![FlipCase::Doe];
        v.extend(["ST", "SU", "U^-1", "T^-1"].map(|s| FlipCase::Side(w(s))));
        v
    }

    pub fn framing(&self) -> Framing {
        match self {
            FlipCase::Doe => Framing::standard(),
            FlipCase::Side(a) => Framing::of_edge(a),
        }
    }

    pub fn name(&self) -> String {
        match self {
            FlipCase::Doe => "doe".into(),
            FlipCase::Side(a) => crate::modular::matrix_to_word(a).to_string(),
        }
    }
}

/// One arc of the proof: coefficients of `ã, b̃, c̃, d̃` and of `ẽ` (left) or
/// `f̃` (right).
#[derive(Clone, Debug)]
pub struct ArcRow {
    pub arc: &'static str,
    pub before: [Sl2; 5],
    pub after: [Sl2; 5],
    /// `before` with `ẽ = ½(ã+b̃+c̃+d̃) − f̃`, minus `after`.
    pub difference: [Sl2; 5],
}

#[derive(Clone, Debug)]
pub struct FlipReport {
    pub case: FlipCase,
    pub rows: Vec<ArcRow>,
    /// Edges outside the quadrilateral whose normalized wavelets differ.
    pub far_edges_changed: usize,
}

impl FlipReport {
    pub fn vanishes(&self) -> bool {
        self.far_edges_changed == 0 && self.rows.iter().all(|r| r.difference.iter().all(Sl2::is_zero))
    }

    pub fn first_failure(&self) -> Option<&ArcRow> {
        self.rows.iter().find(|r| !r.difference.iter().all(Sl2::is_zero))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let m = |x: &Sl2| {
            json!([[format_rat(&x.alpha), format_rat(&x.beta)], [format_rat(&x.gamma), format_rat(&-&x.alpha)]])
        };
        let rows: Vec<_> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "arc": r.arc,
                    "before": r.before.iter().map(m).collect::<Vec<_>>(),
                    "after": r.after.iter().map(m).collect::<Vec<_>>(),
                    "difference": r.difference.iter().map(m).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "case": self.case.name(),
            "symbols_before": ["a", "b", "c", "d", "e"],
            "symbols_after": ["a", "b", "c", "d", "f"],
            "rows": rows,
            "far_edges_changed": self.far_edges_changed,
            "vanishes": self.vanishes(),
        })
    }
}

/// Both arc-wise sums at unit lambda lengths and their difference after the
/// Ptolemy substitution.
pub fn verify_flip_invariance(case: &FlipCase) -> FlipReport {
    let framing = case.framing();
    let before = unflipped_wavelets_with(&framing);
    let after = flipped_wavelets_with(&framing);
    let half = rat(1, 2);
    let rows = subarcs()
        .into_iter()
        .map(|(name, start, _)| {
            let b: [Sl2; 5] = std::array::from_fn(|i| before[i].value_after(&start).clone());
            let a: [Sl2; 5] = std::array::from_fn(|i| after[i].value_after(&start).clone());
            let e = &b[4];
            let diff: [Sl2; 5] = std::array::from_fn(|i| {
                if i < 4 {
                    b[i].add(&e.scale(&half)).sub(&a[i])
                } else {
                    e.neg().sub(&a[4])
                }
            });
            ArcRow { arc: name, before: b, after: a, difference: diff }
        })
        .collect();
    FlipReport { case: case.clone(), rows, far_edges_changed: far_edges_changed(&framing, 3) }
}

/// Count the edges of generation `≤ g` away from the flipped quadrilateral
/// whose wavelets change under the flip of the doe.
pub fn far_edges_changed(framing: &Framing, g: u32) -> usize {
    let t = farey_tessellation(g, &GroupElement::identity());
    let q = doe_quad();
    let (tp, _) = flip(&t, &q.e.0, &q.e.1).expect("interior");
    let near = [&q.a, &q.b, &q.c, &q.d, &q.e];
    t.edges
        .iter()
        .filter(|k| !near.contains(k))
        .filter(|(x, y)| {
            match (edge_wavelet(&t, x, y), edge_wavelet(&tp, x, y)) {
                (Ok(f), Ok(g)) => f.normalize(framing).ok().map(|r| r.0) != g.normalize(framing).ok().map(|r| r.0),
                // boundary edges of the truncation have no quadrilateral on either side
                (Err(_), Err(_)) => false,
                _ => true,
            }
        })
        .count()
}
