//! Horocycles in the upper half-plane: lambda lengths, h-lengths, the Möbius
//! action on decorated points, framings, Ptolemy flips on polygons and the
//! decorated Farey tessellation built from lambda lengths.

use std::collections::{BTreeMap, BTreeSet};

use num::{BigInt, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::modular::{
    edge_endpoints, farey_edges, farey_points, format_rat, matrix_to_word, parse_rat, ExtendedRational, GroupElement,
    GroupWord, Mat2, ModularError, Rat,
};

pub use crate::modular::Framing;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("coincident centers at {0}")]
    Coincident(String),
    #[error("decoration must be positive")]
    NonPositive,
    #[error("{0} is not the square of a rational")]
    NotSquare(String),
    #[error("missing lambda length for edge {0}")]
    MissingEdge(String),
    #[error("degenerate framing")]
    DegenerateFraming,
    #[error("{0} is not an interior diagonal")]
    NotDiagonal(String),
    #[error("duplicate center {0}")]
    Duplicate(String),
    #[error("bad tessellation json: {0}")]
    Json(String),
    #[error("lambda lengths read back differ on edge {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Modular(#[from] ModularError),
}

/// Center and Euclidean diameter of a horocycle; for `s = ∞`, `delta` is
/// the height of the horizontal line.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DecoratedPoint {
    pub s: ExtendedRational,
    pub delta: Rat,
}

impl DecoratedPoint {
    pub fn new(s: ExtendedRational, delta: Rat) -> Result<Self, GeometryError> {
        if !delta.is_positive() {
            return Err(GeometryError::NonPositive);
        }
        Ok(DecoratedPoint { s, delta })
    }
}

/// Exact square root of a non-negative rational, when it is rational.
pub fn rat_sqrt(x: &Rat) -> Option<Rat> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| Rat::new(rn, rd))
}

/// `λ²` between two decorated points.
pub fn lambda_sq(p1: &DecoratedPoint, p2: &DecoratedPoint) -> Result<Rat, GeometryError> {
    if p1.s == p2.s {
        return Err(GeometryError::Coincident(p1.s.to_string()));
    }
    Ok(match (p1.s.to_rat(), p2.s.to_rat()) {
        (Some(a), Some(b)) => {
            let d = a - b;
            &d * &d / (&p1.delta * &p2.delta)
        }
        (None, Some(_)) => &p1.delta / &p2.delta,
        (Some(_), None) => &p2.delta / &p1.delta,
        (None, None) => unreachable!(),
    })
}

/// Exact `λ`; fails when `λ²` is not a rational square.
pub fn lambda_length(p1: &DecoratedPoint, p2: &DecoratedPoint) -> Result<Rat, GeometryError> {
    let l2 = lambda_sq(p1, p2)?;
    rat_sqrt(&l2).ok_or_else(|| GeometryError::NotSquare(format_rat(&l2)))
}

pub fn lambda_length_f64(p1: &DecoratedPoint, p2: &DecoratedPoint) -> Result<f64, GeometryError> {
    Ok(lambda_sq(p1, p2)?.to_f64().unwrap_or(f64::NAN).sqrt())
}

/// The h-length `λᵢ/(λⱼλₖ)` opposite `λᵢ`.
pub fn h_length(li: &Rat, lj: &Rat, lk: &Rat) -> Rat {
    li / (lj * lk)
}

/// `f = (ac + bd)/e`.
pub fn ptolemy_flip(a: &Rat, b: &Rat, c: &Rat, d: &Rat, e: &Rat) -> Rat {
    (a * c + b * d) / e
}

/// `ac/(bd)`; the shear coordinate is its logarithm.
pub fn cross_ratio_shear(a: &Rat, b: &Rat, c: &Rat, d: &Rat) -> Rat {
    (a * c) / (b * d)
}

/// Right action `s ↦ (ds − b)/(−cs + a)` of a matrix with positive
/// determinant, with diameters scaled by the derivative.
pub fn mobius_on_coordinates(p: &DecoratedPoint, m: &Mat2) -> DecoratedPoint {
    let det = m.det();
    match p.s.to_rat() {
        Some(s) => {
            let den = &m.a - &m.c * &s;
            if den.is_zero() {
                // the pole goes to ∞
                let delta = &det / (&m.c * &m.c * &p.delta);
                DecoratedPoint { s: ExtendedRational::infinity(), delta }
            } else {
                let s2 = (&m.d * &s - &m.b) / &den;
                let delta = &p.delta * &det / (&den * &den);
                DecoratedPoint { s: ExtendedRational::from_rat(&s2), delta }
            }
        }
        None => {
            if m.c.is_zero() {
                let s = ExtendedRational::infinity();
                DecoratedPoint { s, delta: &p.delta * &m.d / &m.a }
            } else {
                let s = ExtendedRational::from_rat(&(-&m.d / &m.c));
                DecoratedPoint { s, delta: &det / (&m.c * &m.c * &p.delta) }
            }
        }
    }
}

/// Left action `x ↦ Mx`.
pub fn mobius_left(p: &DecoratedPoint, m: &Mat2) -> DecoratedPoint {
    mobius_on_coordinates(p, &m.adj())
}

fn homog(x: &ExtendedRational) -> (Rat, Rat) {
    (Rat::from_integer(x.p().clone()), Rat::from_integer(x.q().clone()))
}

/// `L_F` with `(u, v, w).L_F = (0/1, 1/0, 1/1)`, as an element of `PGL₂(ℚ)`.
/// Its determinant is positive exactly when `(u, v, w)` is clockwise, like
/// the standard framing.
pub fn framing_matrix(f: &Framing) -> Result<Mat2, GeometryError> {
    let (pu, qu) = homog(&f.u);
    let (pv, qv) = homog(&f.v);
    let (pw, qw) = homog(&f.w);
    let num_w = &qu * &pw - &pu * &qw;
    let den_w = &qv * &pw - &pv * &qw;
    // x ↦ den(w)(q_u x − p_u) / num(w)(q_v x − p_v) as a left Möbius map
    let n = Mat2::new(&den_w * &qu, -(&den_w * &pu), &num_w * &qv, -(&num_w * &pv));
    if n.det().is_zero() {
        return Err(GeometryError::DegenerateFraming);
    }
    Ok(n.adj())
}

/// `L_F⁻¹ L_F̄`: carries `F`-normalized coordinates to `F̄`-normalized ones.
pub fn transition(f: &Framing, fbar: &Framing) -> Result<Mat2, GeometryError> {
    Ok(framing_matrix(f)?.inv().mul(&framing_matrix(fbar)?))
}

/// Inserts `new` in ccw position and re-normalizes everything from `F` to `F̄`.
pub fn stabilize(
    coords: &[DecoratedPoint],
    new: DecoratedPoint,
    f: &Framing,
    fbar: &Framing,
) -> Result<Vec<DecoratedPoint>, GeometryError> {
    if coords.iter().any(|p| p.s == new.s) {
        return Err(GeometryError::Duplicate(new.s.to_string()));
    }
    let mut out = coords.to_vec();
    let slot = out.partition_point(|p| p.s < new.s);
    out.insert(slot, new);
    let m = transition(f, fbar)?;
    if m.det().is_negative() {
        return Err(GeometryError::DegenerateFraming);
    }
    Ok(out.iter().map(|p| mobius_on_coordinates(p, &m)).collect())
}

/// Total h-length at each vertex of a decorated polygon listed ccw:
/// `λ(prev, next)/(λ(v, prev)·λ(v, next))`.
pub fn vertex_h_lengths(pts: &[DecoratedPoint]) -> Result<Vec<Rat>, GeometryError> {
    let n = pts.len();
    (0..n)
        .map(|i| {
            let (p, v, q) = (&pts[(i + n - 1) % n], &pts[i], &pts[(i + 1) % n]);
            Ok(h_length(&lambda_length(p, q)?, &lambda_length(v, p)?, &lambda_length(v, q)?))
        })
        .collect()
}

/// The same h-lengths summed triangle by triangle over a triangulation.
pub fn vertex_h_lengths_triangulated(pts: &[DecoratedPoint], t: &TriangulatedPolygon) -> Result<Vec<Rat>, GeometryError> {
    let mut out = vec![Rat::zero(); pts.len()];
    for [i, j, k] in t.triangles() {
        let (pi, pj, pk) = (&pts[i], &pts[j], &pts[k]);
        let (lij, ljk, lki) = (lambda_length(pi, pj)?, lambda_length(pj, pk)?, lambda_length(pk, pi)?);
        out[i] += h_length(&ljk, &lij, &lki);
        out[j] += h_length(&lki, &lij, &ljk);
        out[k] += h_length(&lij, &ljk, &lki);
    }
    Ok(out)
}

/// An ideal triangulation of an `n`-gon with vertices `0..n` in ccw order,
/// optionally carrying a distinguished oriented diagonal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TriangulatedPolygon {
    pub n: usize,
    pub diagonals: BTreeSet<(usize, usize)>,
    pub doe: Option<(usize, usize)>,
}

fn key(i: usize, j: usize) -> (usize, usize) {
    (i.min(j), i.max(j))
}

impl TriangulatedPolygon {
    /// The fan from vertex 0.
    pub fn fan(n: usize) -> Self {
        assert!(n >= 3);
        TriangulatedPolygon { n, diagonals: (2..n - 1).map(|k| (0, k)).collect(), doe: None }
    }

    pub fn with_doe(mut self, doe: (usize, usize)) -> Self {
        self.doe = Some(doe);
        self
    }

    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        let (a, b) = key(i, j);
        b - a == 1 || (a == 0 && b == self.n - 1)
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && (self.is_boundary(i, j) || self.diagonals.contains(&key(i, j)))
    }

    pub fn edge_count(&self) -> usize {
        self.n + self.diagonals.len()
    }

    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                for k in j + 1..self.n {
                    if self.has_edge(i, j) && self.has_edge(j, k) && self.has_edge(i, k) {
                        out.push([i, j, k]);
                    }
                }
            }
        }
        out
    }

    /// The two apexes over a diagonal: `(k, l)` with `k` on the ccw arc from
    /// `i` to `j` and `l` on the other side.
    fn apexes(&self, i: usize, j: usize) -> Option<(usize, usize)> {
        let between = |a: usize, b: usize, x: usize| (x + self.n - a) % self.n < (b + self.n - a) % self.n && x != a;
        let mut k = None;
        let mut l = None;
        for x in 0..self.n {
            if x == i || x == j || !self.has_edge(i, x) || !self.has_edge(x, j) {
                continue;
            }
            if between(i, j, x) {
                k = Some(x);
            } else {
                l = Some(x);
            }
        }
        Some((k?, l?))
    }

    /// Replaces a diagonal by the other diagonal of its quadrilateral. A
    /// flipped doe `q0 → q2` becomes `q1 → q3`, its ccw quarter turn.
    pub fn flip(&self, d: (usize, usize)) -> Result<Self, GeometryError> {
        let (i, j) = key(d.0, d.1);
        if !self.diagonals.contains(&(i, j)) {
            return Err(GeometryError::NotDiagonal(format!("{i}-{j}")));
        }
        let (k, l) = self.apexes(i, j).ok_or_else(|| GeometryError::NotDiagonal(format!("{i}-{j}")))?;
        let mut out = self.clone();
        out.diagonals.remove(&(i, j));
        out.diagonals.insert(key(k, l));
        if let Some((a, b)) = self.doe {
            if key(a, b) == (i, j) {
                // quadrilateral ccw: i, k, j, l
                out.doe = Some(if a == i { (k, l) } else { (l, k) });
            }
        }
        Ok(out)
    }

    /// The new diagonal created by flipping `d`.
    pub fn flipped_diagonal(&self, d: (usize, usize)) -> Result<(usize, usize), GeometryError> {
        let (i, j) = key(d.0, d.1);
        let (k, l) = self.apexes(i, j).ok_or_else(|| GeometryError::NotDiagonal(format!("{i}-{j}")))?;
        Ok(key(k, l))
    }

    /// Number of steps until repeated flips of `d` return to `self`.
    pub fn face_order(&self, d: (usize, usize), max: usize) -> Result<Option<usize>, GeometryError> {
        let mut cur = self.flip(d)?;
        let mut diag = self.flipped_diagonal(d)?;
        for steps in 1..=max {
            if cur == *self {
                return Ok(Some(steps));
            }
            let next = cur.flipped_diagonal(diag)?;
            cur = cur.flip(diag)?;
            diag = next;
        }
        Ok(None)
    }

    /// Alternately flips two diagonals of a common triangle, always the one
    /// not flipped at the previous step; returns the order.
    pub fn pentagon_order(&self, d1: (usize, usize), d2: (usize, usize), max: usize) -> Result<Option<usize>, GeometryError> {
        let mut slots = [key(d1.0, d1.1), key(d2.0, d2.1)];
        let mut cur = self.clone();
        for step in 0..max {
            let s = step % 2;
            let new = cur.flipped_diagonal(slots[s])?;
            cur = cur.flip(slots[s])?;
            slots[s] = new;
            if cur == *self {
                return Ok(Some(step + 1));
            }
        }
        Ok(None)
    }
}

/// Vertices of generation at most `G`, with lambda lengths on basis edges.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DecoratedTessellationTruncation {
    pub g: u32,
    pub vertices: BTreeMap<ExtendedRational, DecoratedPoint>,
    pub lambda_sq: BTreeMap<GroupElement, Rat>,
}

/// Solves the two lambda equations at each new vertex, generation by
/// generation. Needs every `λ²` to be a rational square.
pub fn build_tessellation(
    lambda_sq_in: &BTreeMap<GroupElement, Rat>,
    g: u32,
) -> Result<DecoratedTessellationTruncation, GeometryError> {
    let lam = |a: &GroupElement| -> Result<Rat, GeometryError> {
        let l2 = lambda_sq_in.get(a).ok_or_else(|| GeometryError::MissingEdge(matrix_to_word(a).to_string()))?;
        if !l2.is_positive() {
            return Err(GeometryError::NonPositive);
        }
        rat_sqrt(l2).ok_or_else(|| GeometryError::NotSquare(format_rat(l2)))
    };
    // σ = √δ for every vertex
    let mut sigma: BTreeMap<ExtendedRational, (Option<Rat>, Rat)> = BTreeMap::new();
    let l_doe = lam(&GroupElement::identity())?;
    sigma.insert(ExtendedRational::infinity(), (None, Rat::one()));
    sigma.insert(ExtendedRational::zero(), (Some(Rat::zero()), Rat::one() / &l_doe));
    for x in farey_points(g).into_iter().skip(2) {
        let (lo, hi) = x.parents().unwrap();
        let a = lam(&crate::modular::basis_label(&lo, &x)?)?;
        let b = lam(&crate::modular::basis_label(&x, &hi)?)?;
        let (s1, sg1) = sigma[&lo].clone();
        let (s2, sg2) = sigma[&hi].clone();
        let (s, sg) = match (s1, s2) {
            (Some(s1), Some(s2)) => {
                let sg = (&s2 - &s1) / (&a * &sg1 + &b * &sg2);
                (&s1 + &a * &sg * &sg1, sg)
            }
            (Some(s1), None) => {
                let sg = &sg2 / &b;
                (&s1 + &a * &sg * &sg1, sg)
            }
            (None, Some(s2)) => {
                let sg = &sg1 / &a;
                (&s2 - &b * &sg * &sg2, sg)
            }
            (None, None) => unreachable!(),
        };
        sigma.insert(x, (Some(s), sg));
    }
    let vertices = sigma
        .into_iter()
        .map(|(x, (s, sg))| {
            let s = s.map_or_else(ExtendedRational::infinity, |r| ExtendedRational::from_rat(&r));
            (x, DecoratedPoint { s, delta: &sg * &sg })
        })
        .collect();
    let lambda_sq = farey_edges(g).into_iter().map(|a| {
        let v = lambda_sq_in[&a].clone();
        (a, v)
    });
    Ok(DecoratedTessellationTruncation { g, vertices, lambda_sq: lambda_sq.collect() })
}

impl DecoratedTessellationTruncation {
    /// `λ²` on every basis edge, recomputed from the decorated points.
    pub fn read_lambdas(&self) -> Result<BTreeMap<GroupElement, Rat>, GeometryError> {
        farey_edges(self.g)
            .into_iter()
            .map(|a| {
                let (x, y) = edge_endpoints(&a);
                Ok((a, lambda_sq(&self.vertices[&x], &self.vertices[&y])?))
            })
            .collect()
    }

    pub fn check(&self) -> Result<(), GeometryError> {
        let read = self.read_lambdas()?;
        for (a, v) in &self.lambda_sq {
            if read.get(a) != Some(v) {
                return Err(GeometryError::Inconsistent(matrix_to_word(a).to_string()));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let j = TessJson {
            g: self.g,
            vertices: self
                .vertices
                .iter()
                .map(|(x, d)| VertexJson {
                    p: x.p().to_string(),
                    q: x.q().to_string(),
                    s: d.s.to_string(),
                    delta: format_rat(&d.delta),
                })
                .collect(),
            edges: self
                .lambda_sq
                .iter()
                .map(|(a, l)| EdgeJson { label: matrix_to_word(a).to_string(), lambda_sq: format_rat(l) })
                .collect(),
        };
        serde_json::to_value(j).expect("serializable")
    }

    /// Parses and checks internal consistency.
    pub fn from_json_str(s: &str) -> Result<Self, GeometryError> {
        let j: TessJson = serde_json::from_str(s).map_err(|e| GeometryError::Json(e.to_string()))?;
        if j.g > 12 {
            return Err(GeometryError::Json("generation bound too large".into()));
        }
        let mut vertices = BTreeMap::new();
        for v in j.vertices {
            let p: BigInt = v.p.parse().map_err(|_| GeometryError::Json(v.p.clone()))?;
            let q: BigInt = v.q.parse().map_err(|_| GeometryError::Json(v.q.clone()))?;
            let x = ExtendedRational::new(p, q)?;
            let pt = DecoratedPoint::new(v.s.parse()?, parse_rat(&v.delta)?)?;
            if vertices.insert(x.clone(), pt).is_some() {
                return Err(GeometryError::Duplicate(x.to_string()));
            }
        }
        let mut lambda_sq = BTreeMap::new();
        for e in j.edges {
            let a = e.label.parse::<GroupWord>()?.to_matrix();
            let l = parse_rat(&e.lambda_sq)?;
            if !l.is_positive() {
                return Err(GeometryError::NonPositive);
            }
            lambda_sq.insert(a, l);
        }
        let expected: BTreeSet<ExtendedRational> = farey_points(j.g).into_iter().collect();
        if vertices.keys().cloned().collect::<BTreeSet<_>>() != expected {
            return Err(GeometryError::Json("vertex set does not match the generation bound".into()));
        }
        let t = DecoratedTessellationTruncation { g: j.g, vertices, lambda_sq };
        for a in farey_edges(t.g) {
            if !t.lambda_sq.contains_key(&a) {
                return Err(GeometryError::MissingEdge(matrix_to_word(&a).to_string()));
            }
        }
        if t.lambda_sq.len() != farey_edges(t.g).len() {
            return Err(GeometryError::Json("extra edges".into()));
        }
        t.check()?;
        Ok(t)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TessJson {
    #[serde(rename = "G")]
    g: u32,
    vertices: Vec<VertexJson>,
    edges: Vec<EdgeJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexJson {
    p: String,
    q: String,
    s: String,
    delta: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeJson {
    label: String,
    lambda_sq: String,
}

/// All-ones lambda lengths to generation `g`.
pub fn unit_lambdas(g: u32) -> BTreeMap<GroupElement, Rat> {
    farey_edges(g).into_iter().map(|a| (a, Rat::one())).collect()
}
