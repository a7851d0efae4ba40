//! The weight-2 Eisenstein series, its non-holomorphic correction, the lift
//! to functions on the group and the Lie algebra action on lifts.

use std::f64::consts::PI;

use num::complex::Complex64;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `σ(n)`, the sum of the positive divisors.
pub fn sigma(n: u64, power: u32) -> u64 {
    let mut s = 0u64;
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            s += d.pow(power);
            let e = n / d;
            if e != d {
                s += e.pow(power);
            }
        }
        d += 1;
    }
    s
}

/// Integer q-expansion coefficients `a₀..a_N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    pub coefficients: Vec<i64>,
}

impl QSeries {
    pub fn truncation(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// `Σ a_n qⁿ` at `q = e^{2πiz}`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let q = (2.0 * PI * I * z).exp();
        self.coefficients.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * q + *a as f64)
    }
}

/// `1 − 24 Σ σ(n) qⁿ`.
pub fn e2_series(n: usize) -> QSeries {
    let mut c = vec![1i64];
    c.extend((1..=n as u64).map(|k| -24 * sigma(k, 1) as i64));
    QSeries { coefficients: c }
}

/// `1 + 240 Σ σ₃(n) qⁿ`.
pub fn e4_series(n: usize) -> QSeries {
    let mut c = vec![1i64];
    c.extend((1..=n as u64).map(|k| 240 * sigma(k, 3) as i64));
    QSeries { coefficients: c }
}

/// Bound on `|Σ_{n>N} C n^p qⁿ|` using `σ_k(n) ≤ n^{k+1}`.
fn tail_bound(scale: f64, power: i32, n: usize, y: f64) -> f64 {
    let r = (-2.0 * PI * y).exp();
    // terms n^p rⁿ decrease once n > p/(−ln r); sum a few hundred and bound the rest geometrically
    let mut s = 0.0;
    let start = n + 1;
    for k in start..start + 400 {
        s += (k as f64).powi(power) * r.powi(k as i32);
    }
    scale * s * 2.0
}

/// `𝔼₂(z)` with a bound on the truncation error, after moving `z` into the
/// fundamental domain by `z ↦ z + k` and `𝔼₂(z) = (𝔼₂(−1/z) − 12z/(2πi))/z²`.
pub fn e2_eval(z: Complex64, n: usize) -> (Complex64, f64) {
    assert!(z.im > 0.0, "upper half-plane only");
    e2_reduced(z, n, 0)
}

fn e2_reduced(z: Complex64, n: usize, depth: u32) -> (Complex64, f64) {
    let z = Complex64::new(z.re - z.re.round(), z.im);
    if z.norm_sqr() >= 1.0 - 1e-12 || depth > 64 {
        let v = e2_series(n).eval(z);
        return (v, tail_bound(24.0, 2, n, z.im));
    }
    let w = -z.inv();
    let (v, err) = e2_reduced(w, n, depth + 1);
    let z2 = z * z;
    ((v - 12.0 * z / (2.0 * PI * I)) / z2, err / z2.norm())
}

/// `E(z) = 𝔼₂(z) − 3/(π y)`, modular of weight 2.
pub fn e2_corrected(z: Complex64, n: usize) -> Complex64 {
    e2_eval(z, n).0 - 3.0 / (PI * z.im)
}

/// `E₄(z)` evaluated after reduction by `E₄(−1/z) = z⁴ E₄(z)`.
pub fn e4_eval(z: Complex64, n: usize) -> Complex64 {
    let mut z = z;
    let mut factor = Complex64::new(1.0, 0.0);
    for _ in 0..64 {
        z = Complex64::new(z.re - z.re.round(), z.im);
        if z.norm_sqr() >= 1.0 - 1e-12 {
            break;
        }
        // E₄(z) = z⁻⁴ E₄(−1/z)
        factor /= z.powi(4);
        z = -z.inv();
    }
    factor * e4_series(n).eval(z)
}

/// `∂/∂z̄` by central differences: `½(∂x + i∂y)`.
pub fn dzbar(f: impl Fn(Complex64) -> Complex64, z: Complex64, h: f64) -> Complex64 {
    let dx = (f(z + h) - f(z - h)) / (2.0 * h);
    let dy = (f(z + I * h) - f(z - I * h)) / (2.0 * h);
    (dx + I * dy) / 2.0
}

/// Iwasawa coordinates `g = n(x) a(y) k(θ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupPoint {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

pub type Matrix = [[f64; 2]; 2];

impl GroupPoint {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        assert!(y > 0.0, "y must be positive");
        GroupPoint { x, y, theta }
    }

    pub fn to_matrix(&self) -> Matrix {
        let r = self.y.sqrt();
        let (s, c) = self.theta.sin_cos();
        [[r * c - self.x * s / r, r * s + self.x * c / r], [-s / r, c / r]]
    }

    /// Inverse of `to_matrix` for `det = 1`.
    pub fn from_matrix(m: &Matrix) -> Self {
        let [[a, b], [c, d]] = *m;
        let n = c * c + d * d;
        GroupPoint { x: (a * c + b * d) / n, y: 1.0 / n, theta: (-c).atan2(d) }
    }
}

pub fn mat_mul(p: &Matrix, q: &Matrix) -> Matrix {
    let mut r = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = p[i][0] * q[0][j] + p[i][1] * q[1][j];
        }
    }
    r
}

/// `exp(tX)` for traceless real `X`.
pub fn exp_sl2(x: &Matrix, t: f64) -> Matrix {
    let [[a, b], [c, _]] = *x;
    let disc = a * a + b * c;
    let (ch, sh) = if disc > 0.0 {
        let w = disc.sqrt();
        ((w * t).cosh(), (w * t).sinh() / w)
    } else if disc < 0.0 {
        let w = (-disc).sqrt();
        ((w * t).cos(), (w * t).sin() / w)
    } else {
        (1.0, t)
    };
    [[ch + sh * a, sh * b], [sh * c, ch - sh * a]]
}

/// `φ_f(g) = (ci + d)^{−2k} f(g·i)`.
pub fn lift(m: &Matrix, k: i32, f: &dyn Fn(Complex64) -> Complex64) -> Complex64 {
    let [[a, b], [c, d]] = *m;
    let z = Complex64::new(b, a) / Complex64::new(d, c);
    Complex64::new(d, c).powi(-2 * k) * f(z)
}

pub fn lift_point(g: &GroupPoint, k: i32, f: &dyn Fn(Complex64) -> Complex64) -> Complex64 {
    lift(&g.to_matrix(), k, f)
}

/// A function on the group given in Iwasawa coordinates.
pub type GroupFunction<'a> = dyn Fn(&GroupPoint) -> Complex64 + 'a;

/// `d/dt φ(g exp(tX))` at `t = 0` for real `X`, by central differences.
pub fn right_derivative(phi: &GroupFunction, g: &GroupPoint, x: &Matrix, h: f64) -> Complex64 {
    let m = g.to_matrix();
    let at = |t: f64| phi(&GroupPoint::from_matrix(&mat_mul(&m, &exp_sl2(x, t))));
    (at(h) - at(-h)) / (2.0 * h)
}

/// `D(X)` for complex `X = X₁ + i X₂`.
pub fn complex_right_derivative(phi: &GroupFunction, g: &GroupPoint, x: &[[Complex64; 2]; 2], h: f64) -> Complex64 {
    let re = x.map(|r| r.map(|z| z.re));
    let im = x.map(|r| r.map(|z| z.im));
    right_derivative(phi, g, &re, h) + I * right_derivative(phi, g, &im, h)
}

/// The Cayley images of `h`, `e`, `f`.
pub mod cayley {
    use super::*;

    pub fn h() -> [[Complex64; 2]; 2] {
        [[0.0.into(), -I], [I, 0.0.into()]]
    }

    /// The displayed `H = (0 −1; i 0)`, which is not traceless-symmetric.
    pub fn h_printed() -> [[Complex64; 2]; 2] {
        [[0.0.into(), (-1.0).into()], [I, 0.0.into()]]
    }

    pub fn e() -> [[Complex64; 2]; 2] {
        [[0.5.into(), I * 0.5], [I * 0.5, (-0.5).into()]]
    }

    pub fn f() -> [[Complex64; 2]; 2] {
        [[0.5.into(), -I * 0.5], [-I * 0.5, (-0.5).into()]]
    }
}

/// Partial derivatives in `(x, y, θ)` by central differences.
pub struct Stencil<'a> {
    pub phi: &'a GroupFunction<'a>,
    pub h: f64,
}

impl Stencil<'_> {
    fn at(&self, g: &GroupPoint, dx: f64, dy: f64, dt: f64) -> Complex64 {
        (self.phi)(&GroupPoint::new(g.x + dx, g.y + dy, g.theta + dt))
    }

    pub fn dx(&self, g: &GroupPoint) -> Complex64 {
        (self.at(g, self.h, 0.0, 0.0) - self.at(g, -self.h, 0.0, 0.0)) / (2.0 * self.h)
    }

    pub fn dy(&self, g: &GroupPoint) -> Complex64 {
        (self.at(g, 0.0, self.h, 0.0) - self.at(g, 0.0, -self.h, 0.0)) / (2.0 * self.h)
    }

    pub fn dtheta(&self, g: &GroupPoint) -> Complex64 {
        (self.at(g, 0.0, 0.0, self.h) - self.at(g, 0.0, 0.0, -self.h)) / (2.0 * self.h)
    }

    pub fn dz(&self, g: &GroupPoint) -> Complex64 {
        (self.dx(g) - I * self.dy(g)) / 2.0
    }

    pub fn dzbar(&self, g: &GroupPoint) -> Complex64 {
        (self.dx(g) + I * self.dy(g)) / 2.0
    }

    pub fn dxx(&self, g: &GroupPoint) -> Complex64 {
        (self.at(g, self.h, 0.0, 0.0) - 2.0 * self.at(g, 0.0, 0.0, 0.0) + self.at(g, -self.h, 0.0, 0.0)) / (self.h * self.h)
    }

    pub fn dyy(&self, g: &GroupPoint) -> Complex64 {
        (self.at(g, 0.0, self.h, 0.0) - 2.0 * self.at(g, 0.0, 0.0, 0.0) + self.at(g, 0.0, -self.h, 0.0)) / (self.h * self.h)
    }

    pub fn dxt(&self, g: &GroupPoint) -> Complex64 {
        let h = self.h;
        (self.at(g, h, 0.0, h) - self.at(g, h, 0.0, -h) - self.at(g, -h, 0.0, h) + self.at(g, -h, 0.0, -h)) / (4.0 * h * h)
    }

    /// `−∂θ` as displayed.
    pub fn h_printed(&self, g: &GroupPoint) -> Complex64 {
        -self.dtheta(g)
    }

    /// `−i∂θ`, the right-derivative along the Cayley image of `h`.
    pub fn h_op(&self, g: &GroupPoint) -> Complex64 {
        -I * self.dtheta(g)
    }

    /// `2i e^{2iθ}(y∂z̄ − ¼∂θ)` as displayed.
    pub fn e_printed(&self, g: &GroupPoint) -> Complex64 {
        2.0 * I * (2.0 * I * g.theta).exp() * (self.dzbar(g) * g.y - self.dtheta(g) / 4.0)
    }

    /// `2i e^{2iθ}(y∂z − ¼∂θ)`, the right-derivative along the Cayley image of `e`.
    pub fn e_op(&self, g: &GroupPoint) -> Complex64 {
        2.0 * I * (2.0 * I * g.theta).exp() * (self.dz(g) * g.y - self.dtheta(g) / 4.0)
    }

    /// `−2i e^{−2iθ}(y∂z̄ − ¼∂θ)`.
    pub fn f_op(&self, g: &GroupPoint) -> Complex64 {
        -2.0 * I * (-2.0 * I * g.theta).exp() * (self.dzbar(g) * g.y - self.dtheta(g) / 4.0)
    }

    /// `Δ = y²(∂x² + ∂y²) − y∂x∂θ`.
    pub fn casimir(&self, g: &GroupPoint) -> Complex64 {
        (self.dxx(g) + self.dyy(g)) * g.y * g.y - self.dxt(g) * g.y
    }
}

/// The weight-2 lift `y e^{2iθ} E(x + iy)` of the corrected series.
pub fn e2_lift(n: usize) -> impl Fn(&GroupPoint) -> Complex64 {
    move |g: &GroupPoint| lift_point(g, 1, &|z| e2_corrected(z, n))
}

/// The weight-4 lift of `E₄`.
pub fn e4_lift(n: usize) -> impl Fn(&GroupPoint) -> Complex64 {
    move |g: &GroupPoint| lift_point(g, 2, &|z| e4_eval(z, n))
}
