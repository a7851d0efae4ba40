//! Fourier coefficients of piecewise fields, the closed forms for wavelets
//! and hyperfans, and the Witt-generator expansion.
//!
//! Coefficients are taken against `e^{inθ}` with `e^{iθ} = (s − i)/(s + i)`,
//! so increasing `s` is increasing `θ`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num::complex::Complex64;

use crate::fields::{PiecewiseField, Sl2};
use crate::modular::{edge_endpoints, farey_edges, ExtendedRational, GroupElement};
use crate::wavelets::normalized_wavelet;
use crate::Framing;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `∫_{t0}^{t1} e^{ikθ} dθ` with `z0 = e^{it0}`, `z1 = e^{it1}`.
fn exp_integral(k: i64, t0: f64, t1: f64, z0: Complex64, z1: Complex64) -> Complex64 {
    if k == 0 {
        return c(t1 - t0);
    }
    (z1.powi(k as i32) - z0.powi(k as i32)) / (I * k as f64)
}

/// `e^{iθ}` at a rational point, from exact integers rather than the angle.
fn unit_point(x: &ExtendedRational) -> Complex64 {
    let (p, q) = (x.p(), x.q());
    let n = p * p + q * q;
    let f = |v: num::BigInt| num::ToPrimitive::to_f64(&num::BigRational::new(v, n.clone())).unwrap_or(f64::NAN);
    Complex64::new(f(p * p - q * q), f(-(p * q) * 2))
}

/// The piece `x` written as `A e^{iθ} + B e^{−iθ} + R`.
pub fn trig_coefficients(x: &Sl2) -> (Complex64, Complex64, Complex64) {
    let [alpha, beta, gamma] = x.to_f64();
    let p = gamma + beta;
    let q = 2.0 * alpha;
    (c(p / 2.0) + c(q) / (I * 2.0), c(p / 2.0) - c(q) / (I * 2.0), c(gamma - beta))
}

/// `(1/2π) ∫_{t0}^{t1} x(θ) e^{−inθ} dθ`.
pub fn piece_coefficient(x: &Sl2, t0: f64, t1: f64, n: i64) -> Complex64 {
    let (z0, z1) = ((I * t0).exp(), (I * t1).exp());
    arc_coefficient(x, t0, t1, z0, z1, n)
}

fn arc_coefficient(x: &Sl2, t0: f64, t1: f64, z0: Complex64, z1: Complex64, n: i64) -> Complex64 {
    let (a, b, r) = trig_coefficients(x);
    let e = |k| exp_integral(k, t0, t1, z0, z1);
    (a * e(1 - n) + b * e(-1 - n) + r * e(-n)) / (2.0 * PI)
}

type Arc<'a> = (f64, f64, Complex64, Complex64, &'a Sl2);

/// Arcs `(t0, t1, e^{it0}, e^{it1}, value)` with `t0 < t1`, covering one turn.
fn arcs(f: &PiecewiseField) -> Vec<Arc<'_>> {
    match f {
        PiecewiseField::Global(x) => vec![(0.0, 2.0 * PI, c(1.0), c(1.0), x)],
        PiecewiseField::Pieces(ps) => {
            let n = ps.len();
            (0..n)
                .map(|i| {
                    let (p0, p1) = (&ps[i].0, &ps[(i + 1) % n].0);
                    let t0 = p0.angle();
                    let mut t1 = p1.angle();
                    if t1 <= t0 {
                        t1 += 2.0 * PI;
                    }
                    (t0, t1, unit_point(p0), unit_point(p1), &ps[i].1)
                })
                .collect()
        }
    }
}

/// The n-th Fourier coefficient from exact per-piece antiderivatives.
pub fn quadrature_oracle(f: &PiecewiseField, n: i64) -> Complex64 {
    arcs(f).into_iter().map(|(t0, t1, z0, z1, x)| arc_coefficient(x, t0, t1, z0, z1, n)).sum()
}

/// Composite Simpson quadrature on each arc; a slow cross-check of the oracle.
pub fn simpson_coefficient(f: &PiecewiseField, n: i64, panels: usize) -> Complex64 {
    let panels = panels + panels % 2;
    let mut total = c(0.0);
    for (t0, t1, _, _, x) in arcs(f) {
        let h = (t1 - t0) / panels as f64;
        let g = |t: f64| c(x.scalar_at_angle(t)) * (-I * n as f64 * t).exp();
        let mut s = g(t0) + g(t1);
        for j in 1..panels {
            let w = if j % 2 == 1 { 4.0 } else { 2.0 };
            s += g(t0 + j as f64 * h) * w;
        }
        total += s * h / 3.0;
    }
    total / (2.0 * PI)
}

#[derive(Clone, Debug, Default)]
pub struct FourierSeries {
    pub coefficients: BTreeMap<i64, Complex64>,
    pub truncation: u32,
}

impl FourierSeries {
    pub fn of_field(f: &PiecewiseField, nmax: u32) -> Self {
        let n = nmax as i64;
        FourierSeries { coefficients: (-n..=n).map(|k| (k, quadrature_oracle(f, k))).collect(), truncation: nmax }
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        self.coefficients.iter().map(|(n, cn)| cn * (I * *n as f64 * theta).exp()).sum()
    }

    /// `max |c_{−n} − conj(c_n)|`.
    pub fn reality_defect(&self) -> f64 {
        self.coefficients
            .iter()
            .filter_map(|(n, cn)| self.coefficients.get(&-n).map(|cm| (cm - cn.conj()).norm()))
            .fold(0.0, f64::max)
    }
}

fn entries(a: &GroupElement) -> [f64; 4] {
    let m = a.to_mat2();
    [&m.a, &m.b, &m.c, &m.d].map(|r| num::ToPrimitive::to_f64(r).unwrap_or(f64::NAN))
}

/// The four weights and points of the wavelet closed form.
fn wavelet_terms(a: &GroupElement) -> [(f64, Complex64); 4] {
    let [a, b, c_, d] = entries(a);
    let z = |x: f64, y: f64| Complex64::new(x, -y) / Complex64::new(x, y);
    [
        (-((c_ - a).powi(2) + (b - d).powi(2)), z(b - d, a - c_)),
        (2.0 * (c_ * c_ + d * d), z(d, c_)),
        (2.0 * (a * a + b * b), z(b, a)),
        (-((c_ + a).powi(2) + (b + d).powi(2)), z(b + d, a + c_)),
    ]
}

/// `c_n(ϑ̄_A)` for `n² > 1` by the four-term closed form.
pub fn wavelet_fourier(a: &GroupElement, n: i64) -> Complex64 {
    assert!(n.abs() >= 2, "closed form needs n² > 1");
    let nf = n as f64;
    let s: Complex64 = wavelet_terms(a).iter().map(|(w, z)| z.powi(n as i32) * *w).sum();
    s / (I * PI * (nf * nf * nf - nf))
}

/// `c_{−1}, c_0, c_1` of `ϑ̄_A` from the three vanishing conditions at the
/// framing points, with the high modes truncated at `nmax`. Returns the modes
/// and a bound on the truncation error of the right-hand sides.
pub fn wavelet_small_modes(a: &GroupElement, framing: &Framing, nmax: u32) -> ([Complex64; 3], f64) {
    let pts: Vec<f64> = framing.points().iter().map(|p| p.angle()).collect();
    let mut m = [[c(0.0); 3]; 3];
    let mut rhs = [c(0.0); 3];
    for (j, t) in pts.iter().enumerate() {
        let z = (I * *t).exp();
        m[j] = [z.conj(), c(1.0), z];
        let mut s = c(0.0);
        for n in 2..=nmax as i64 {
            s += wavelet_fourier(a, n) * z.powi(n as i32) + wavelet_fourier(a, -n) * z.powi(-(n as i32));
        }
        rhs[j] = -s;
    }
    let k: f64 = wavelet_terms(a).iter().map(|(w, _)| w.abs()).sum();
    // Σ_{|n|>N} k/(π(|n|³−|n|)) ≤ k/(π N(N−1))
    let nn = nmax as f64;
    let tail = k / (PI * nn * (nn - 1.0));
    (solve3(m, rhs), tail)
}

fn solve3(mut m: [[Complex64; 3]; 3], mut b: [Complex64; 3]) -> [Complex64; 3] {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm())).unwrap_or(col);
        m.swap(col, piv);
        b.swap(col, piv);
        for r in 0..3 {
            if r != col {
                let k = m[r][col] / m[col][col];
                for cc in 0..3 {
                    let v = m[col][cc];
                    m[r][cc] -= k * v;
                }
                let v = b[col];
                b[r] -= k * v;
            }
        }
    }
    [b[0] / m[0][0], b[1] / m[1][1], b[2] / m[2][2]]
}

/// All modes of `ϑ̄_A` (standard framing), with small modes from the
/// normalization conditions.
pub fn normalized_wavelet_fourier(a: &GroupElement, n: i64, nmax: u32) -> Complex64 {
    if n.abs() >= 2 {
        return wavelet_fourier(a, n);
    }
    let (modes, _) = wavelet_small_modes(a, &Framing::standard(), nmax);
    modes[(n + 1) as usize]
}

struct HyperfanData {
    q: Complex64,
    p: Complex64,
    k: f64,
    zeta_minus: Complex64,
    zeta_plus: Complex64,
    arc: f64,
}

fn hyperfan_data(a: &GroupElement) -> HyperfanData {
    let [a, b, c_, d] = entries(a);
    let zeta_minus = Complex64::new(b, -a) / Complex64::new(b, a);
    let zeta_plus = Complex64::new(d, -c_) / Complex64::new(d, c_);
    // the support runs ccw from ζ₊⁻¹ to ζ₋⁻¹
    let mut arc = (zeta_minus.conj().arg() - zeta_plus.conj().arg()).rem_euclid(2.0 * PI);
    if arc == 0.0 {
        arc = 2.0 * PI;
    }
    HyperfanData {
        q: Complex64::new(d, -c_).powi(2) / 2.0,
        p: Complex64::new(d, c_).powi(2) / 2.0,
        k: c_ * c_ + d * d,
        zeta_minus,
        zeta_plus,
        arc,
    }
}

/// `c_n(ψ_A)` for every `n`, by integrating the three exponentials over the
/// support arc.
pub fn hyperfan_fourier(a: &GroupElement, n: i64) -> Complex64 {
    let h = hyperfan_data(a);
    let nf = n as f64;
    let g = |z: Complex64| {
        let mut s = c(0.0);
        if n != 1 {
            s += h.q * z.powi((n - 1) as i32) / (1.0 - nf);
        }
        if n != -1 {
            s -= h.p * z.powi((n + 1) as i32) / (1.0 + nf);
        }
        if n != 0 {
            s += z.powi(n as i32) * h.k / nf;
        }
        s
    };
    let mut s = g(h.zeta_minus) - g(h.zeta_plus);
    match n {
        1 => s += I * h.q * h.arc,
        -1 => s += I * h.p * h.arc,
        0 => s -= I * h.k * h.arc,
        _ => {}
    }
    s / (2.0 * PI * I)
}

/// The hyperfan coefficients exactly as displayed in the appendix, with
/// `θ∓ = arg ζ±` and `θ₊ − θ₋` taken as the support arc length.
pub fn hyperfan_fourier_printed(a: &GroupElement, n: i64) -> Complex64 {
    let h = hyperfan_data(a);
    let nf = n as f64;
    let (zm, zp) = (h.zeta_minus, h.zeta_plus);
    let dt = h.arc;
    let s = match n {
        0 => h.q * (zp.inv() - zm.inv()) - h.p * (zp - zm) + I * h.k * dt,
        1 => -h.p * (zp.powi(2) - zm.powi(2)) + (zp - zm) * h.k - I * h.q * dt,
        -1 => h.q * (zp.powi(-2) - zm.powi(-2)) - (zp.inv() - zm.inv()) * h.k - I * h.p * dt,
        _ => {
            let bracket = |z: Complex64| h.q * z / (nf + 1.0) + h.p * z.inv() / (nf - 1.0) - h.k / nf;
            zm.powi(n as i32) * bracket(zm) - zp.powi(n as i32) * bracket(zp)
        }
    };
    s / (2.0 * PI * I)
}

/// `(b₀ⁿ, b₊₁ⁿ, b₋₁ⁿ)` from the mod-4 table.
pub fn witt_b(n: i64) -> (Complex64, Complex64, Complex64) {
    let z = c(0.0);
    match n.rem_euclid(4) {
        0 => (c(1.0), z, z),
        1 => (z, c(1.0), z),
        2 => (c(1.0), -I, I),
        _ => (z, z, c(1.0)),
    }
}

/// `(i/4){n(ξⁿ+ηⁿ) + ((η+ξ)/(η−ξ))(ξⁿ−ηⁿ)}` for the edge labelled `e`.
pub fn witt_coefficient(n: i64, e: &GroupElement) -> Complex64 {
    let (x, y) = edge_endpoints(e);
    let xi = cayley(&x);
    let eta = cayley(&y);
    let nf = n as f64;
    let xn = xi.powi(n as i32);
    let en = eta.powi(n as i32);
    I / 4.0 * ((xn + en) * nf + (eta + xi) / (eta - xi) * (xn - en))
}

pub fn cayley(x: &ExtendedRational) -> Complex64 {
    (I * x.angle()).exp()
}

/// Sampler for the partial Witt sum over basis edges to generation `g`.
/// `sign` multiplies the edge sum; `+1` is the displayed form.
pub struct WittPartialSum {
    n: i64,
    sign: f64,
    terms: Vec<(Complex64, PiecewiseField)>,
}

impl WittPartialSum {
    pub fn new(n: i64, g: u32, sign: f64) -> Self {
        let fr = Framing::standard();
        let terms = farey_edges(g).iter().map(|e| (witt_coefficient(n, e), normalized_wavelet(e, &fr))).collect();
        WittPartialSum { n, sign, terms }
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        let (b0, bp, bm) = witt_b(self.n);
        let z = (I * theta).exp();
        let global = b0 + bp * z + bm * z.conj();
        let edges: Complex64 = self.terms.iter().map(|(k, f)| k * f.evaluate_angle(theta)).sum();
        global + edges * self.sign
    }

    /// `max |partial sum − e^{inθ}|` over the sample angles.
    pub fn max_error(&self, samples: &[f64]) -> f64 {
        samples.iter().map(|t| (self.eval(*t) - (I * self.n as f64 * t).exp()).norm()).fold(0.0, f64::max)
    }
}

/// Least-squares slope of `−log|c_n|` against `log n` over the nonzero modes.
pub fn decay_exponent(coeffs: &[(i64, Complex64)]) -> f64 {
    let pts: Vec<(f64, f64)> = coeffs
        .iter()
        .filter(|(_, cn)| cn.norm() > 1e-300)
        .map(|(n, cn)| ((n.abs() as f64).ln(), -cn.norm().ln()))
        .collect();
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let num: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    num / den
}

/// One CSV row: closed form against the oracle.
#[derive(Clone, Debug)]
pub struct FourierRow {
    pub word: String,
    pub n: i64,
    pub closed: Complex64,
    pub oracle: Complex64,
}

impl FourierRow {
    pub const HEADER: &'static str = "word,n,re,im,oracle_re,oracle_im,abs_err";

    pub fn csv(&self) -> String {
        format!(
            "{},{},{:.15e},{:.15e},{:.15e},{:.15e},{:.3e}",
            self.word,
            self.n,
            self.closed.re,
            self.closed.im,
            self.oracle.re,
            self.oracle.im,
            (self.closed - self.oracle).norm()
        )
    }
}
