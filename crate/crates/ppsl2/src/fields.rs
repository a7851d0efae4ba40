//! `sl₂` and the piecewise `sl₂` vector fields on the circle.
//!
//! An element `X = (α β; γ −α)` is the generator of the flow `s ↦ s.exp(tX)`,
//! which in the angle coordinate is `(γ+β) cos θ + 2α sin θ + (γ−β)` times
//! `∂/∂θ`.

use std::fmt;

use num::{BigInt, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;
use crate::modular::{format_rat, parse_rat, ExtendedRational, Framing, Mat2, ModularError, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("breakpoint {0} listed twice")]
    DuplicateBreakpoint(String),
    #[error("matrix is not traceless")]
    NotTraceless,
    #[error("framing gives a singular system")]
    SingularFraming,
    #[error(transparent)]
    Modular(#[from] ModularError),
    #[error("bad field json: {0}")]
    Json(String),
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Sl2 {
    pub alpha: Rat,
    pub beta: Rat,
    pub gamma: Rat,
}

impl Sl2 {
    pub fn new(alpha: Rat, beta: Rat, gamma: Rat) -> Self {
        Sl2 { alpha, beta, gamma }
    }

    pub fn from_ints(alpha: i64, beta: i64, gamma: i64) -> Self {
        Sl2::new(crate::int(alpha), crate::int(beta), crate::int(gamma))
    }

    pub fn zero() -> Self {
        Self::default()
    }
    pub fn h() -> Self {
        Self::from_ints(1, 0, 0)
    }
    pub fn e() -> Self {
        Self::from_ints(0, 1, 0)
    }
    pub fn f() -> Self {
        Self::from_ints(0, 0, 1)
    }

    /// `x h + y e + z f`.
    pub fn hef(x: Rat, y: Rat, z: Rat) -> Self {
        Sl2::new(x, y, z)
    }

    pub fn from_matrix(m: &Mat2) -> Result<Self, FieldError> {
        if !(&m.a + &m.d).is_zero() {
            return Err(FieldError::NotTraceless);
        }
        Ok(Sl2::new(m.a.clone(), m.b.clone(), m.c.clone()))
    }

    /// The matrix `(a b; c d)` given by integer entries; must be traceless.
    pub fn from_entries(a: Rat, b: Rat, c: Rat, d: Rat) -> Result<Self, FieldError> {
        Self::from_matrix(&Mat2::new(a, b, c, d))
    }

    pub fn to_matrix(&self) -> Mat2 {
        Mat2::new(self.alpha.clone(), self.beta.clone(), self.gamma.clone(), -&self.alpha)
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.beta.is_zero() && self.gamma.is_zero()
    }

    pub fn add(&self, o: &Sl2) -> Sl2 {
        Sl2::new(&self.alpha + &o.alpha, &self.beta + &o.beta, &self.gamma + &o.gamma)
    }

    pub fn sub(&self, o: &Sl2) -> Sl2 {
        Sl2::new(&self.alpha - &o.alpha, &self.beta - &o.beta, &self.gamma - &o.gamma)
    }

    pub fn neg(&self) -> Sl2 {
        Sl2::new(-&self.alpha, -&self.beta, -&self.gamma)
    }

    pub fn scale(&self, k: &Rat) -> Sl2 {
        Sl2::new(k * &self.alpha, k * &self.beta, k * &self.gamma)
    }

    /// The commutator `xy − yx`.
    pub fn bracket(&self, o: &Sl2) -> Sl2 {
        let two = crate::int(2);
        Sl2::new(
            &self.beta * &o.gamma - &self.gamma * &o.beta,
            &two * (&self.alpha * &o.beta - &self.beta * &o.alpha),
            &two * (&self.gamma * &o.alpha - &self.alpha * &o.gamma),
        )
    }

    /// `tr(xy)`.
    pub fn trace_form(&self, o: &Sl2) -> Rat {
        crate::int(2) * &self.alpha * &o.alpha + &self.beta * &o.gamma + &self.gamma * &o.beta
    }

    /// `A⁻¹ x A`; invariant under rescaling `A`.
    pub fn conj(&self, a: &Mat2) -> Sl2 {
        let m = a.inv().mul(&self.to_matrix()).mul(a);
        Sl2::new(m.a, m.b, m.c)
    }

    /// The `∂/∂θ` coefficient at a rational point.
    pub fn scalar_at(&self, x: &ExtendedRational) -> Rat {
        let p = Rat::from_integer(x.p().clone());
        let q = Rat::from_integer(x.q().clone());
        let num = &self.gamma * &p * &p - crate::int(2) * &self.alpha * &p * &q - &self.beta * &q * &q;
        crate::int(2) * num / (&p * &p + &q * &q)
    }

    /// The `∂/∂θ` coefficient at angle `θ`.
    pub fn scalar_at_angle(&self, theta: f64) -> f64 {
        let [a, b, c] = self.to_f64();
        (c + b) * theta.cos() + 2.0 * a * theta.sin() + (c - b)
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [&self.alpha, &self.beta, &self.gamma].map(|r| r.to_f64().unwrap_or(f64::NAN))
    }
}

impl fmt::Display for Sl2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.alpha, self.beta, self.gamma, -&self.alpha)
    }
}

impl fmt::Debug for Sl2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A piecewise `sl₂` vector field in canonical form.
///
/// `Pieces` holds `(b, X)` sorted ccw from `∞`, meaning `X` on the open arc
/// from `b` to the next breakpoint; neighbouring values always differ.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum PiecewiseField {
    Global(Sl2),
    Pieces(Vec<(ExtendedRational, Sl2)>),
}

impl PiecewiseField {
    pub fn zero() -> Self {
        PiecewiseField::Global(Sl2::zero())
    }

    pub fn global(x: Sl2) -> Self {
        PiecewiseField::Global(x)
    }

    /// Sorts and coalesces; rejects repeated breakpoints.
    pub fn from_pieces(mut pieces: Vec<(ExtendedRational, Sl2)>) -> Result<Self, FieldError> {
        if pieces.is_empty() {
            return Ok(Self::zero());
        }
        pieces.sort_by(|x, y| x.0.cmp(&y.0));
        if let Some(w) = pieces.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(FieldError::DuplicateBreakpoint(w[0].0.to_string()));
        }
        Ok(Self::coalesce(pieces))
    }

    fn coalesce(pieces: Vec<(ExtendedRational, Sl2)>) -> Self {
        let n = pieces.len();
        let keep: Vec<bool> = (0..n).map(|i| pieces[i].1 != pieces[(i + n - 1) % n].1).collect();
        if !keep.iter().any(|&k| k) {
            return PiecewiseField::Global(pieces.into_iter().next().unwrap().1);
        }
        PiecewiseField::Pieces(pieces.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p).collect())
    }

    /// The field equal to `x` on the ccw arc from `from` to `to` and to `y` elsewhere.
    pub fn arc(from: &ExtendedRational, to: &ExtendedRational, x: Sl2, y: Sl2) -> Self {
        Self::from_pieces(vec![(from.clone(), x), (to.clone(), y)]).expect("distinct endpoints")
    }

    /// Values on quadrants I, II, III, IV, i.e. the arcs cut by `∞, −1, 0, 1`.
    pub fn quadrants(v: [Sl2; 4]) -> Self {
        let [a, b, c, d] = v;
        Self::from_pieces(vec![
            (ExtendedRational::infinity(), a),
            (ExtendedRational::integer(-1), b),
            (ExtendedRational::zero(), c),
            (ExtendedRational::integer(1), d),
        ])
        .unwrap()
    }

    pub fn is_global(&self) -> bool {
        matches!(self, PiecewiseField::Global(_))
    }

    pub fn as_global(&self) -> Option<&Sl2> {
        match self {
            PiecewiseField::Global(x) => Some(x),
            _ => None,
        }
    }

    pub fn breakpoints(&self) -> Vec<ExtendedRational> {
        match self {
            PiecewiseField::Global(_) => Vec::new(),
            PiecewiseField::Pieces(p) => p.iter().map(|(b, _)| b.clone()).collect(),
        }
    }

    pub fn pieces(&self) -> &[(ExtendedRational, Sl2)] {
        match self {
            PiecewiseField::Global(_) => &[],
            PiecewiseField::Pieces(p) => p,
        }
    }

    /// Value on the arc just ccw of `x`.
    pub fn value_after(&self, x: &ExtendedRational) -> &Sl2 {
        match self {
            PiecewiseField::Global(v) => v,
            PiecewiseField::Pieces(p) => {
                let i = p.partition_point(|(b, _)| b <= x);
                &p[(i + p.len() - 1) % p.len()].1
            }
        }
    }

    /// Value on the arc just clockwise of `x`.
    pub fn value_before(&self, x: &ExtendedRational) -> &Sl2 {
        match self {
            PiecewiseField::Global(v) => v,
            PiecewiseField::Pieces(p) => {
                let i = p.partition_point(|(b, _)| b < x);
                &p[(i + p.len() - 1) % p.len()].1
            }
        }
    }

    /// The `∂/∂θ` coefficient at `x`, averaged at breakpoints.
    pub fn evaluate(&self, x: &ExtendedRational) -> Rat {
        let a = self.value_before(x).scalar_at(x);
        let b = self.value_after(x).scalar_at(x);
        (a + b) / crate::int(2)
    }

    /// The `∂/∂θ` coefficient at angle `θ`, where ∞ sits at `θ = 0`.
    pub fn evaluate_angle(&self, theta: f64) -> f64 {
        self.value_at_angle(theta).scalar_at_angle(theta)
    }

    /// Piece value at a generic angle (no averaging).
    pub fn value_at_angle(&self, theta: f64) -> &Sl2 {
        match self {
            PiecewiseField::Global(v) => v,
            PiecewiseField::Pieces(p) => {
                let i = p.partition_point(|(b, _)| b.angle() <= theta);
                &p[(i + p.len() - 1) % p.len()].1
            }
        }
    }

    /// Pointwise combination of several fields on the union of their breakpoints.
    pub fn combine(fields: &[&PiecewiseField], op: impl Fn(&[&Sl2]) -> Sl2) -> Self {
        let mut bps: Vec<ExtendedRational> = fields.iter().flat_map(|f| f.breakpoints()).collect();
        bps.sort();
        bps.dedup();
        if bps.is_empty() {
            let vals: Vec<&Sl2> = fields.iter().map(|f| f.value_after(&ExtendedRational::zero())).collect();
            return PiecewiseField::Global(op(&vals));
        }
        let pieces = bps
            .into_iter()
            .map(|b| {
                let vals: Vec<&Sl2> = fields.iter().map(|f| f.value_after(&b)).collect();
                let v = op(&vals);
                (b, v)
            })
            .collect();
        Self::coalesce(pieces)
    }

    pub fn map(&self, op: impl Fn(&Sl2) -> Sl2) -> Self {
        Self::combine(&[self], |v| op(v[0]))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::combine(&[self, o], |v| v[0].add(v[1]))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::combine(&[self, o], |v| v[0].sub(v[1]))
    }

    pub fn neg(&self) -> Self {
        self.map(Sl2::neg)
    }

    pub fn scale(&self, k: &Rat) -> Self {
        self.map(|x| x.scale(k))
    }

    pub fn add_global(&self, x: &Sl2) -> Self {
        self.map(|v| v.add(x))
    }

    /// `Σ kᵢ fᵢ` in a single pass.
    pub fn linear_combination(terms: &[(Rat, &PiecewiseField)]) -> Self {
        let fields: Vec<&PiecewiseField> = terms.iter().map(|t| t.1).collect();
        Self::combine(&fields, |vals| {
            vals.iter().zip(terms).fold(Sl2::zero(), |acc, (v, (k, _))| acc.add(&v.scale(k)))
        })
    }

    pub fn bracket(&self, o: &Self) -> Self {
        Self::combine(&[self, o], |v| v[0].bracket(v[1]))
    }

    /// Values `x ↦ A⁻¹xA`, breakpoints `b ↦ b.A`.
    pub fn conjugate(&self, a: &Mat2) -> Self {
        match self {
            PiecewiseField::Global(x) => PiecewiseField::Global(x.conj(a)),
            PiecewiseField::Pieces(p) => {
                let mut q: Vec<_> = p.iter().map(|(b, v)| (a.act(b), v.conj(a))).collect();
                q.sort_by(|x, y| x.0.cmp(&y.0));
                PiecewiseField::Pieces(q)
            }
        }
    }

    /// Subtracts the global field matching `self` at the three framing points.
    pub fn normalize(&self, framing: &Framing) -> Result<(PiecewiseField, Sl2), FieldError> {
        let pts = framing.points();
        let rows = pts.iter().map(|s| vec![Sl2::h().scalar_at(s), Sl2::e().scalar_at(s), Sl2::f().scalar_at(s)]).collect();
        let rhs = pts.iter().map(|s| self.evaluate(s)).collect();
        let x = linalg::solve(rows, rhs).unique().ok_or(FieldError::SingularFraming)?;
        let x = Sl2::hef(x[0].clone(), x[1].clone(), x[2].clone());
        Ok((self.sub(&PiecewiseField::Global(x.clone())), x))
    }

    /// Largest breakpoint generation (0 for a global field).
    pub fn max_generation(&self) -> u32 {
        self.breakpoints().iter().map(ExtendedRational::generation).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let j = match self {
            PiecewiseField::Global(x) => FieldJson { pieces: None, global: Some(Sl2Json::from(x)) },
            PiecewiseField::Pieces(p) => FieldJson {
                pieces: Some(
                    p.iter()
                        .map(|(b, v)| {
                            let s = Sl2Json::from(v);
                            PieceJson { at: b.to_string(), alpha: s.alpha, beta: s.beta, gamma: s.gamma }
                        })
                        .collect(),
                ),
                global: None,
            },
        };
        serde_json::to_value(j).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Self, FieldError> {
        let j: FieldJson = serde_json::from_str(s).map_err(|e| FieldError::Json(e.to_string()))?;
        Self::from_json(j)
    }

    pub fn from_json_value(v: serde_json::Value) -> Result<Self, FieldError> {
        let j: FieldJson = serde_json::from_value(v).map_err(|e| FieldError::Json(e.to_string()))?;
        Self::from_json(j)
    }

    fn from_json(j: FieldJson) -> Result<Self, FieldError> {
        match (j.pieces, j.global) {
            (None, Some(g)) => Ok(PiecewiseField::Global(g.to_sl2()?)),
            (Some(p), None) => {
                let pieces = p
                    .into_iter()
                    .map(|x| {
                        let at: ExtendedRational = x.at.parse()?;
                        let v = Sl2Json { alpha: x.alpha, beta: x.beta, gamma: x.gamma }.to_sl2()?;
                        Ok((at, v))
                    })
                    .collect::<Result<Vec<_>, FieldError>>()?;
                Self::from_pieces(pieces)
            }
            _ => Err(FieldError::Json("need exactly one of `pieces` and `global`".into())),
        }
    }
}

impl fmt::Display for PiecewiseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PiecewiseField::Global(x) => write!(f, "global {x}"),
            PiecewiseField::Pieces(p) => {
                let parts: Vec<String> = p.iter().map(|(b, v)| format!("{b}: {v}")).collect();
                write!(f, "[{}]", parts.join(", "))
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pieces: Option<Vec<PieceJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    global: Option<Sl2Json>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PieceJson {
    at: String,
    alpha: String,
    beta: String,
    gamma: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct Sl2Json {
    pub alpha: String,
    pub beta: String,
    pub gamma: String,
}

impl From<&Sl2> for Sl2Json {
    fn from(x: &Sl2) -> Self {
        Sl2Json { alpha: format_rat(&x.alpha), beta: format_rat(&x.beta), gamma: format_rat(&x.gamma) }
    }
}

impl Sl2Json {
    pub fn to_sl2(&self) -> Result<Sl2, FieldError> {
        Ok(Sl2::new(parse_rat(&self.alpha)?, parse_rat(&self.beta)?, parse_rat(&self.gamma)?))
    }
}

/// Exact derivative of `x ↦ x.A` at `s` pulled back to the angle coordinate:
/// the factor relating `evaluate(conjugate(f, A), s.A)` to `evaluate(f, s)`.
pub fn angle_derivative(a: &crate::GroupElement, s: &ExtendedRational) -> Rat {
    // in homogeneous terms θ-derivative of the map is (p² + q²)/(p'² + q'²)
    let [ma, mb, mc, md] = a.entries();
    let (p, q) = (s.p().clone(), s.q().clone());
    let p2: BigInt = &p * &md - &q * &mb;
    let q2: BigInt = &q * &ma - &p * &mc;
    let num = &p * &p + &q * &q;
    let den = &p2 * &p2 + &q2 * &q2;
    debug_assert!(den.is_positive());
    Rat::new(den, num).recip()
}
