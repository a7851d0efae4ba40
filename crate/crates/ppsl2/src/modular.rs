//! The modular group acting on the rational points of the circle.
//!
//! Points of `Q ∪ {∞}` are stored as reduced integer pairs and ordered
//! counterclockwise starting at `∞`, which is the same as increasing order on
//! the extended real line. `PSL₂(ℤ)` acts on the right by
//! `s.A = (d s − b)/(−c s + a)`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rat = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModularError {
    #[error("0/0 is not a point of the circle")]
    ZeroOverZero,
    #[error("cannot parse `{0}`")]
    Parse(String),
    #[error("determinant is {0}, expected 1")]
    Determinant(String),
    #[error("{0} and {1} are not Farey neighbours")]
    NotNeighbours(String, String),
    #[error("ccw needs three distinct points")]
    Repeated,
    #[error("no listed point between {0} and {1}")]
    EmptyInterval(String, String),
    #[error("generation {0} exceeds the tessellation depth {1}")]
    TooDeep(u32, u32),
    #[error("tessellation has no triangle on edge {0}-{1}")]
    MissingTriangle(String, String),
}

/// A point of `Q̂`, stored as a reduced fraction with non-negative denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtendedRational {
    p: BigInt,
    q: BigInt,
}

impl ExtendedRational {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self, ModularError> {
        let (mut p, mut q) = (p.into(), q.into());
        if p.is_zero() && q.is_zero() {
            return Err(ModularError::ZeroOverZero);
        }
        if q.is_zero() {
            return Ok(Self::infinity());
        }
        let g = p.gcd(&q);
        p /= &g;
        q /= &g;
        if q.is_negative() {
            p = -p;
            q = -q;
        }
        Ok(ExtendedRational { p, q })
    }

    pub fn infinity() -> Self {
        ExtendedRational { p: BigInt::one(), q: BigInt::zero() }
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn integer(n: i64) -> Self {
        ExtendedRational { p: BigInt::from(n), q: BigInt::one() }
    }

    pub fn from_rat(r: &Rat) -> Self {
        ExtendedRational { p: r.numer().clone(), q: r.denom().clone() }
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn is_infinity(&self) -> bool {
        self.q.is_zero()
    }

    pub fn to_rat(&self) -> Option<Rat> {
        if self.is_infinity() {
            None
        } else {
            Some(Rat::new(self.p.clone(), self.q.clone()))
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self.to_rat() {
            Some(r) => r.to_f64().unwrap_or(f64::NAN),
            None => f64::INFINITY,
        }
    }

    /// Exact Cayley image `(p² − q², −2pq) / (p² + q²)` as (re, im).
    pub fn cayley(&self) -> (Rat, Rat) {
        let w = &self.p * &self.p + &self.q * &self.q;
        let re = Rat::new(&self.p * &self.p - &self.q * &self.q, w.clone());
        let im = Rat::new(BigInt::from(-2) * &self.p * &self.q, w);
        (re, im)
    }

    /// Angle of the Cayley image in `[0, 2π)`; `∞` sits at 0.
    pub fn angle(&self) -> f64 {
        let p = self.p.to_f64().unwrap_or(f64::NAN);
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        let t = (-2.0 * p * q).atan2(p * p - q * q);
        if t < 0.0 {
            t + 2.0 * std::f64::consts::PI
        } else {
            t
        }
    }

    /// Mediant depth: the sum of the continued-fraction quotients of `|p|/q`.
    pub fn generation(&self) -> u32 {
        if self.is_infinity() || self.p.is_zero() {
            return 0;
        }
        let (mut a, mut b) = (self.p.abs(), self.q.clone());
        let mut total = BigInt::zero();
        while !b.is_zero() {
            let (quot, rem) = a.div_rem(&b);
            total += quot;
            a = b;
            b = rem;
        }
        total.to_u32().expect("generation overflow")
    }

    /// The two lower-generation Farey neighbours `(lo, hi)` with `x` on the
    /// ccw arc from `lo` to `hi`. `None` for the generation-zero points.
    pub fn parents(&self) -> Option<(ExtendedRational, ExtendedRational)> {
        if self.generation() == 0 {
            return None;
        }
        let neg = self.p.is_negative();
        let target = Rat::new(self.p.abs(), self.q.clone());
        let (mut lo, mut hi) = ((BigInt::zero(), BigInt::one()), (BigInt::one(), BigInt::zero()));
        loop {
            let m = (&lo.0 + &hi.0, &lo.1 + &hi.1);
            let mv = Rat::new(m.0.clone(), m.1.clone());
            match target.cmp(&mv) {
                Ordering::Equal => break,
                Ordering::Less => hi = m,
                Ordering::Greater => lo = m,
            }
        }
        let lo = ExtendedRational::new(lo.0, lo.1).unwrap();
        let hi = ExtendedRational::new(hi.0, hi.1).unwrap();
        if neg {
            Some((hi.neg(), lo.neg()))
        } else {
            Some((lo, hi))
        }
    }

    pub fn neg(&self) -> Self {
        if self.is_infinity() {
            self.clone()
        } else {
            ExtendedRational { p: -&self.p, q: self.q.clone() }
        }
    }

    pub fn is_farey_neighbour(&self, other: &Self) -> bool {
        (&self.p * &other.q - &self.q * &other.p).abs().is_one()
    }
}

impl Ord for ExtendedRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_infinity(), other.is_infinity()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => (&self.p * &other.q).cmp(&(&other.p * &self.q)),
        }
    }
}

impl PartialOrd for ExtendedRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl fmt::Debug for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for ExtendedRational {
    type Err = ModularError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "inf" || t == "∞" || t == "oo" {
            return Ok(Self::infinity());
        }
        let bad = || ModularError::Parse(s.to_string());
        match t.split_once('/') {
            Some((a, b)) => {
                let p = parse_int(a).ok_or_else(bad)?;
                let q = parse_int(b).ok_or_else(bad)?;
                Self::new(p, q)
            }
            None => Ok(Self::new(parse_int(t).ok_or_else(bad)?, 1)?),
        }
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let s = s.trim().replace('−', "-");
    if s.is_empty() || s.len() > 4096 {
        return None;
    }
    let digits = s.strip_prefix(['-', '+']).unwrap_or(&s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Parses `p/q` (or an integer) into an exact rational; rejects `∞`.
pub fn parse_rat(s: &str) -> Result<Rat, ModularError> {
    ExtendedRational::from_str(s)?.to_rat().ok_or_else(|| ModularError::Parse(s.to_string()))
}

pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// The ccw-open-arc test for any linearly ordered model of the circle.
pub fn in_ccw_arc<P: Ord>(start: &P, end: &P, z: &P) -> bool {
    if start < end {
        start < z && z < end
    } else {
        z > start || z < end
    }
}

/// Exact counterclockwise test on the Cayley images.
pub fn ccw(a: &ExtendedRational, b: &ExtendedRational, c: &ExtendedRational) -> Result<bool, ModularError> {
    if a == b || b == c || a == c {
        return Err(ModularError::Repeated);
    }
    let hom = |x: &ExtendedRational| {
        let (p, q) = (&x.p, &x.q);
        (p * p - q * q, BigInt::from(-2) * p * q, p * p + q * q)
    };
    let (x1, y1, w1) = hom(a);
    let (x2, y2, w2) = hom(b);
    let (x3, y3, w3) = hom(c);
    let det = &x1 * (&y2 * &w3 - &w2 * &y3) - &y1 * (&x2 * &w3 - &w2 * &x3) + &w1 * (&x2 * &y3 - &y2 * &x3);
    Ok(det.is_positive())
}

/// A `PSL₂(ℤ)` element, sign-normalized so that `c > 0`, or `c = 0` and `a > 0`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl GroupElement {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self, ModularError> {
        let (a, b, c, d) = (a.into(), b.into(), c.into(), d.into());
        let det = &a * &d - &b * &c;
        if !det.is_one() {
            return Err(ModularError::Determinant(det.to_string()));
        }
        Ok(Self::normalized(a, b, c, d))
    }

    fn normalized(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        if c.is_negative() || (c.is_zero() && a.is_negative()) {
            GroupElement { a: -a, b: -b, c: -c, d: -d }
        } else {
            GroupElement { a, b, c, d }
        }
    }

    fn raw(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(a, b, c, d).expect("unimodular constant")
    }

    pub fn identity() -> Self {
        Self::raw(1, 0, 0, 1)
    }
    pub fn s() -> Self {
        Self::raw(0, -1, 1, 0)
    }
    pub fn t() -> Self {
        Self::raw(1, 1, 0, 1)
    }
    pub fn u() -> Self {
        Self::raw(1, 0, 1, 1)
    }
    /// `R = T⁻¹U`, of order three.
    pub fn r() -> Self {
        Self::t().inv().mul(&Self::u())
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn entries(&self) -> [BigInt; 4] {
        [self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()]
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::normalized(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }

    pub fn inv(&self) -> Self {
        Self::normalized(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inv() } else { self.clone() };
        (0..n.unsigned_abs()).fold(Self::identity(), |acc, _| acc.mul(&base))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn to_mat2(&self) -> Mat2 {
        Mat2::from_ints(&self.a, &self.b, &self.c, &self.d)
    }

    /// The `b ↦ b.A` image under the right action.
    pub fn act(&self, x: &ExtendedRational) -> ExtendedRational {
        act_right(x, self)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `(p d − q b)/(q a − p c)`.
pub fn act_right(x: &ExtendedRational, m: &GroupElement) -> ExtendedRational {
    let num = &x.p * &m.d - &x.q * &m.b;
    let den = &x.q * &m.a - &x.p * &m.c;
    ExtendedRational::new(num, den).expect("unimodular image")
}

/// Initial and terminal point of the oriented edge `e_A`: `(−b/a, −d/c)`.
pub fn edge_endpoints(m: &GroupElement) -> (ExtendedRational, ExtendedRational) {
    (
        ExtendedRational::new(-&m.b, m.a.clone()).unwrap(),
        ExtendedRational::new(-&m.d, m.c.clone()).unwrap(),
    )
}

/// The unique `A` with `e_A` running from `x` to `y`.
pub fn edge_label(x: &ExtendedRational, y: &ExtendedRational) -> Result<GroupElement, ModularError> {
    let (p, q, r, s) = (&x.p, &x.q, &y.p, &y.q);
    let det = r * q - p * s;
    // columns of A⁻¹ send ∞ to y and 0 to x
    let inv = if det.is_one() {
        (r.clone(), p.clone(), s.clone(), q.clone())
    } else if (-&det).is_one() {
        (-r, p.clone(), -s, q.clone())
    } else {
        return Err(ModularError::NotNeighbours(x.to_string(), y.to_string()));
    };
    Ok(GroupElement::new(inv.0, inv.1, inv.2, inv.3)?.inv())
}

/// The label of the unoriented Farey edge `{x, y}` in the hyperfan basis:
/// the doe `I`, or oriented from the lower to the higher generation endpoint.
pub fn basis_label(x: &ExtendedRational, y: &ExtendedRational) -> Result<GroupElement, ModularError> {
    let (gx, gy) = (x.generation(), y.generation());
    if gx == 0 && gy == 0 {
        return Ok(GroupElement::identity());
    }
    if gx < gy {
        edge_label(x, y)
    } else {
        edge_label(y, x)
    }
}

pub fn in_basis(m: &GroupElement) -> bool {
    let (x, y) = edge_endpoints(m);
    match (x.generation(), y.generation()) {
        (0, 0) => m.is_identity(),
        (gx, gy) => gx < gy,
    }
}

/// A rational 2x2 matrix with non-zero determinant, used projectively.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat2 {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

impl Mat2 {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn from_ints(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> Self {
        let r = |x: &BigInt| Rat::from_integer(x.clone());
        Mat2 { a: r(a), b: r(b), c: r(c), d: r(d) }
    }

    pub fn identity() -> Self {
        Self::from_ints(&BigInt::one(), &BigInt::zero(), &BigInt::zero(), &BigInt::one())
    }

    pub fn det(&self) -> Rat {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn mul(&self, o: &Self) -> Self {
        Mat2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    /// The adjugate, which is the inverse up to the scalar `det`.
    pub fn adj(&self) -> Self {
        Mat2 { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone() }
    }

    pub fn inv(&self) -> Self {
        let det = self.det();
        let m = self.adj();
        Mat2 { a: m.a / &det, b: m.b / &det, c: m.c / &det, d: m.d / &det }
    }

    /// Right action `s.M`, i.e. the Möbius map of the adjugate.
    pub fn act(&self, x: &ExtendedRational) -> ExtendedRational {
        let (p, q) = (Rat::from_integer(x.p.clone()), Rat::from_integer(x.q.clone()));
        let num = &p * &self.d - &q * &self.b;
        let den = &q * &self.a - &p * &self.c;
        if den.is_zero() {
            return ExtendedRational::infinity();
        }
        ExtendedRational::from_rat(&(num / den))
    }

    /// Equality as elements of `PGL₂(ℚ)`.
    pub fn projectively_eq(&self, o: &Self) -> bool {
        let u = [&self.a, &self.b, &self.c, &self.d];
        let v = [&o.a, &o.b, &o.c, &o.d];
        (0..4).all(|i| (0..4).all(|j| u[i] * v[j] == u[j] * v[i]))
    }
}

/// A letter of a word in the generators.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Letter {
    R,
    R2,
    S,
    T,
    TInv,
    U,
    UInv,
}

impl Letter {
    pub fn matrix(self) -> GroupElement {
        match self {
            Letter::R => GroupElement::r(),
            Letter::R2 => GroupElement::r().pow(2),
            Letter::S => GroupElement::s(),
            Letter::T => GroupElement::t(),
            Letter::TInv => GroupElement::t().inv(),
            Letter::U => GroupElement::u(),
            Letter::UInv => GroupElement::u().inv(),
        }
    }

    /// Contribution to the exponent sum in `U` and `T⁻¹`.
    fn coset_weight(self) -> i64 {
        match self {
            Letter::U | Letter::TInv => 1,
            Letter::UInv | Letter::T => -1,
            Letter::S => -3,
            Letter::R => 2,
            Letter::R2 => 4,
        }
    }

    fn base(self) -> (&'static str, i64) {
        match self {
            Letter::R => ("R", 1),
            Letter::R2 => ("R", 2),
            Letter::S => ("S", 1),
            Letter::T => ("T", 1),
            Letter::TInv => ("T", -1),
            Letter::U => ("U", 1),
            Letter::UInv => ("U", -1),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GroupWord {
    pub letters: Vec<Letter>,
}

impl GroupWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        GroupWord { letters }
    }

    pub fn to_matrix(&self) -> GroupElement {
        word_to_matrix(self)
    }
}

pub fn word_to_matrix(w: &GroupWord) -> GroupElement {
    w.letters.iter().fold(GroupElement::identity(), |acc, l| acc.mul(&l.matrix()))
}

/// Column Euclid: peel `T^k` and `U^k` off the left until what is left is
/// `T^k` or `S·T^k`.
pub fn matrix_to_word(m: &GroupElement) -> GroupWord {
    let (mut a, mut b, mut c, mut d) = (m.a.clone(), m.b.clone(), m.c.clone(), m.d.clone());
    let mut out = Vec::new();
    let push = |out: &mut Vec<Letter>, pos: Letter, neg: Letter, k: &BigInt| {
        let n = k.to_i64().expect("exponent overflow");
        let l = if n >= 0 { pos } else { neg };
        out.extend(std::iter::repeat(l).take(n.unsigned_abs() as usize));
    };
    while !a.is_zero() && !c.is_zero() {
        if a.abs() >= c.abs() {
            let k = a.div_floor(&c);
            let k = if c.is_negative() && !(&a - &k * &c).is_zero() { k + 1 } else { k };
            // A = T^k · (T^-k A)
            push(&mut out, Letter::T, Letter::TInv, &k);
            a -= &k * &c;
            b -= &k * &d;
        } else {
            let k = c.div_floor(&a);
            let k = if a.is_negative() && !(&c - &k * &a).is_zero() { k + 1 } else { k };
            push(&mut out, Letter::U, Letter::UInv, &k);
            c -= &k * &a;
            d -= &k * &b;
        }
    }
    if c.is_zero() {
        // ±(1 k; 0 1)
        let k = if a.is_positive() { b } else { -b };
        push(&mut out, Letter::T, Letter::TInv, &k);
    } else {
        // (0 b; c d) = S · T^m with m = c·d
        out.push(Letter::S);
        let k = &c * &d;
        push(&mut out, Letter::T, Letter::TInv, &k);
    }
    GroupWord::new(out)
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "I");
        }
        let mut runs: Vec<(&str, i64)> = Vec::new();
        for l in &self.letters {
            let (name, e) = l.base();
            match runs.last_mut() {
                Some((n, k)) if *n == name && name != "S" && name != "R" && (*k > 0) == (e > 0) => *k += e,
                _ => runs.push((name, e)),
            }
        }
        let parts: Vec<String> = runs
            .iter()
            .map(|(n, k)| if *k == 1 { n.to_string() } else { format!("{n}^{k}") })
            .collect();
        write!(f, "{}", parts.join("·"))
    }
}

impl FromStr for GroupWord {
    type Err = ModularError;

    /// Letters `R S T U`, each optionally followed by `^k`, `⁻¹`, `²` or `'`
    /// (inverse); separators `·`, `*`, `.` and whitespace are ignored. `I`
    /// or the empty string is the identity.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModularError::Parse(s.to_string());
        let chars: Vec<char> = s.chars().filter(|c| !matches!(c, '·' | '*' | '.' | ' ' | '\t')).collect();
        let mut out = Vec::new();
        let mut i = 0;
        if chars == ['I'] {
            return Ok(GroupWord::default());
        }
        while i < chars.len() {
            let base = chars[i];
            if !matches!(base, 'R' | 'S' | 'T' | 'U') {
                return Err(bad());
            }
            i += 1;
            let mut exp: i64 = 1;
            if i < chars.len() {
                match chars[i] {
                    '^' => {
                        i += 1;
                        let start = i;
                        if i < chars.len() && (chars[i] == '-' || chars[i] == '−') {
                            i += 1;
                        }
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                        let txt: String = chars[start..i].iter().collect::<String>().replace('−', "-");
                        if txt.len() > 6 {
                            return Err(bad());
                        }
                        exp = txt.parse().map_err(|_| bad())?;
                    }
                    '⁻' => {
                        i += 1;
                        let start = i;
                        while i < chars.len() && superscript_digit(chars[i]).is_some() {
                            i += 1;
                        }
                        if i == start || i - start > 6 {
                            return Err(bad());
                        }
                        exp = -chars[start..i].iter().fold(0, |acc, &c| acc * 10 + superscript_digit(c).unwrap());
                    }
                    '\'' => {
                        i += 1;
                        exp = -1;
                    }
                    c if superscript_digit(c).is_some() => {
                        let start = i;
                        while i < chars.len() && superscript_digit(chars[i]).is_some() {
                            i += 1;
                        }
                        if i - start > 6 {
                            return Err(bad());
                        }
                        exp = chars[start..i].iter().fold(0, |acc, &c| acc * 10 + superscript_digit(c).unwrap());
                    }
                    _ => {}
                }
            }
            let (pos, neg, period) = match base {
                'R' => (Letter::R, Letter::R2, 3),
                'S' => (Letter::S, Letter::S, 2),
                'T' => (Letter::T, Letter::TInv, 0),
                _ => (Letter::U, Letter::UInv, 0),
            };
            if period > 0 {
                let r = exp.rem_euclid(period);
                if base == 'R' && r == 2 {
                    out.push(neg);
                } else if r == 1 {
                    out.push(pos);
                }
            } else {
                let l = if exp >= 0 { pos } else { neg };
                out.extend(std::iter::repeat(l).take(exp.unsigned_abs() as usize));
            }
        }
        Ok(GroupWord::new(out))
    }
}

fn superscript_digit(c: char) -> Option<i64> {
    "⁰¹²³⁴⁵⁶⁷⁸⁹".chars().position(|d| d == c).map(|p| p as i64)
}

/// Residue mod 6 of the exponent sum in `U` and `T⁻¹`.
pub fn commutant_coset(m: &GroupElement) -> u8 {
    let w = matrix_to_word(m);
    let s: i64 = w.letters.iter().map(|l| l.coset_weight()).sum();
    s.rem_euclid(6) as u8
}

/// The `n`-th point in the order "generation, then ccw from `0/1`".
pub fn farey_enumeration(n: u64) -> ExtendedRational {
    match n {
        0 => return ExtendedRational::zero(),
        1 => return ExtendedRational::infinity(),
        _ => {}
    }
    let g = 63 - n.leading_zeros();
    let k = n - (1u64 << g);
    let half = 1u64 << (g - 1);
    if k < half {
        stern_brocot(g, k)
    } else {
        stern_brocot(g, half - 1 - (k - half)).neg()
    }
}

/// The `k`-th positive point of depth `g`, in increasing order.
fn stern_brocot(g: u32, k: u64) -> ExtendedRational {
    let (mut lo, mut hi) = ((BigInt::zero(), BigInt::one()), (BigInt::one(), BigInt::zero()));
    let mut cur = (BigInt::one(), BigInt::one());
    for i in (0..g - 1).rev() {
        if (k >> i) & 1 == 0 {
            hi = cur.clone();
        } else {
            lo = cur.clone();
        }
        cur = (&lo.0 + &hi.0, &lo.1 + &hi.1);
    }
    ExtendedRational::new(cur.0, cur.1).unwrap()
}

/// All points of generation at most `g`, in enumeration order.
pub fn farey_points(g: u32) -> Vec<ExtendedRational> {
    (0..(2u64 << g)).map(farey_enumeration).collect()
}

/// The unoriented Farey edges with both endpoints of generation at most `g`,
/// each given by its basis label.
pub fn farey_edges(g: u32) -> Vec<GroupElement> {
    let mut out = vec![GroupElement::identity()];
    for x in farey_points(g).into_iter().skip(2) {
        let (lo, hi) = x.parents().unwrap();
        out.push(basis_label(&lo, &x).unwrap());
        out.push(basis_label(&x, &hi).unwrap());
    }
    out
}

/// The complementary triangles with all vertices of generation at most `g`,
/// vertices listed ccw.
pub fn farey_triangles(g: u32) -> Vec<[ExtendedRational; 3]> {
    farey_points(g)
        .into_iter()
        .skip(2)
        .map(|x| {
            let (lo, hi) = x.parents().unwrap();
            [lo, x, hi]
        })
        .collect()
}

/// The partial correspondence of an enumeration with the Farey points.
#[derive(Clone, Debug)]
pub struct Correspondence<P> {
    pub depth: u32,
    pub map: BTreeMap<ExtendedRational, P>,
    pub edges: Vec<(P, P)>,
}

/// Each Farey point goes to the least-index listed point in the arc spanned
/// by the images of its parents. `P` is any linear order cutting the circle.
pub fn tessellation_from_enumeration<P: Ord + Clone + fmt::Debug>(
    points: &[P],
    depth: u32,
) -> Result<Correspondence<P>, ModularError> {
    if points.len() < 2 {
        return Err(ModularError::EmptyInterval("start".into(), "end".into()));
    }
    let mut map = BTreeMap::new();
    map.insert(ExtendedRational::zero(), points[0].clone());
    map.insert(ExtendedRational::infinity(), points[1].clone());
    let mut edges = vec![(points[0].clone(), points[1].clone())];
    for x in farey_points(depth).into_iter().skip(2) {
        let (lo, hi) = x.parents().unwrap();
        let (flo, fhi) = (map[&lo].clone(), map[&hi].clone());
        let z = points
            .iter()
            .find(|z| in_ccw_arc(&flo, &fhi, z))
            .ok_or_else(|| ModularError::EmptyInterval(format!("{flo:?}"), format!("{fhi:?}")))?
            .clone();
        edges.push((flo, z.clone()));
        edges.push((z.clone(), fhi));
        map.insert(x, z);
    }
    Ok(Correspondence { depth, map, edges })
}

/// True iff the images, read in ccw order of the sources, are ccw.
pub fn preserves_cyclic_order<P: Ord>(map: &BTreeMap<ExtendedRational, P>) -> bool {
    let v: Vec<&P> = map.values().collect();
    let descents = (0..v.len()).filter(|&i| v[i] >= v[(i + 1) % v.len()]).count();
    descents <= 1
}

/// A finite triangulated polygon with a distinguished oriented edge.
#[derive(Clone, Debug)]
pub struct FiniteTessellation<P: Ord> {
    pub vertices: BTreeSet<P>,
    pub edges: BTreeSet<(P, P)>,
    pub doe: (P, P),
}

impl<P: Ord + Clone> FiniteTessellation<P> {
    pub fn new(edges: impl IntoIterator<Item = (P, P)>, doe: (P, P)) -> Self {
        let mut es = BTreeSet::new();
        let mut vs = BTreeSet::new();
        for (x, y) in edges {
            vs.insert(x.clone());
            vs.insert(y.clone());
            es.insert(if x < y { (x, y) } else { (y, x) });
        }
        FiniteTessellation { vertices: vs, edges: es, doe }
    }

    pub fn has_edge(&self, x: &P, y: &P) -> bool {
        let k = if x < y { (x.clone(), y.clone()) } else { (y.clone(), x.clone()) };
        self.edges.contains(&k)
    }
}

/// The Farey truncation to generation `g` with doe `e_A`.
pub fn farey_tessellation(g: u32, doe: &GroupElement) -> FiniteTessellation<ExtendedRational> {
    let edges = farey_edges(g).iter().map(edge_endpoints).collect::<Vec<_>>();
    FiniteTessellation::new(edges, edge_endpoints(doe))
}

/// Triangle-matching map from the Farey points of generation `≤ depth` into a
/// tessellation with doe.
pub fn characteristic_map<P: Ord + Clone + fmt::Debug>(
    tess: &FiniteTessellation<P>,
    depth: u32,
) -> Result<BTreeMap<ExtendedRational, P>, ModularError> {
    let mut map = BTreeMap::new();
    map.insert(ExtendedRational::zero(), tess.doe.0.clone());
    map.insert(ExtendedRational::infinity(), tess.doe.1.clone());
    for x in farey_points(depth).into_iter().skip(2) {
        let (lo, hi) = x.parents().unwrap();
        let (flo, fhi) = (map[&lo].clone(), map[&hi].clone());
        let w = tess
            .vertices
            .iter()
            .find(|w| in_ccw_arc(&flo, &fhi, *w) && tess.has_edge(&flo, w) && tess.has_edge(w, &fhi))
            .ok_or_else(|| ModularError::MissingTriangle(format!("{flo:?}"), format!("{fhi:?}")))?
            .clone();
        map.insert(x, w);
    }
    Ok(map)
}

/// Image of a single point of generation `≤ depth`.
pub fn characteristic_image<P: Ord + Clone + fmt::Debug>(
    tess: &FiniteTessellation<P>,
    depth: u32,
    x: &ExtendedRational,
) -> Result<P, ModularError> {
    let g = x.generation();
    if g > depth {
        return Err(ModularError::TooDeep(g, depth));
    }
    Ok(characteristic_map(tess, g)?[x].clone())
}

/// Dyadic points (in turns) in generation-then-ccw order, to generation `g`.
pub fn dyadic_enumeration(g: u32) -> Vec<Rat> {
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    let mut out = vec![half.clone(), Rat::zero()];
    for k in 1..=g {
        let den = BigInt::one() << (k + 1);
        let all: Vec<Rat> = (0..(1u64 << k)).map(|j| Rat::new(BigInt::from(2 * j + 1), den.clone())).collect();
        out.extend(all.iter().filter(|t| **t > half).cloned());
        out.extend(all.iter().filter(|t| **t < half).cloned());
    }
    out
}

/// Three pairwise distinct points of the circle.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Framing {
    pub u: ExtendedRational,
    pub v: ExtendedRational,
    pub w: ExtendedRational,
}

impl Framing {
    pub fn new(u: ExtendedRational, v: ExtendedRational, w: ExtendedRational) -> Result<Self, ModularError> {
        if u == v || v == w || u == w {
            return Err(ModularError::Repeated);
        }
        Ok(Framing { u, v, w })
    }

    /// `(0/1, 1/0, 1/1)`.
    pub fn standard() -> Self {
        Framing { u: ExtendedRational::zero(), v: ExtendedRational::infinity(), w: ExtendedRational::integer(1) }
    }

    /// The image of the standard framing under `A`, i.e. the framing adapted to the edge `e_A`.
    pub fn of_edge(a: &GroupElement) -> Self {
        let s = Self::standard();
        Framing { u: a.act(&s.u), v: a.act(&s.v), w: a.act(&s.w) }
    }

    pub fn points(&self) -> [&ExtendedRational; 3] {
        [&self.u, &self.v, &self.w]
    }
}
