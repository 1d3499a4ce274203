//! Truncated complex power series with a declared validity radius.
//!
//! A [`TaylorSeries`] stores `coeffs[n]`, the coefficient of zⁿ, and the
//! radius of the closed disc on which the truncation is declared to be a
//! faithful approximation. Polynomials and truncations of entire functions
//! carry an infinite radius.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angle::RotationAngle;
use crate::blaschke::winding::winding_on_circle;
use crate::error::{Error, Result};
use crate::tolerance::{PIVOT_TOL, ZERO_COEFF};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct TaylorSeries {
    coeffs: Vec<Complex64>,
    radius: f64,
}

/// Maximum of |f| on a circle, with a certified sampling error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleSup {
    pub value: f64,
    pub error_bound: f64,
    pub argmax_angle: f64,
}

impl TaylorSeries {
    /// Builds a series, trimming trailing zero coefficients. A series whose
    /// coefficients are all below `1e-14` in modulus becomes the zero series.
    pub fn new(coeffs: Vec<Complex64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidRadius(radius));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("series coefficients must be finite".into()));
        }
        Ok(Self::normalized(coeffs, radius))
    }

    fn normalized(mut coeffs: Vec<Complex64>, radius: f64) -> Self {
        if coeffs.iter().all(|c| c.norm() < ZERO_COEFF) {
            coeffs.clear();
        }
        while coeffs.len() > 1 && coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        TaylorSeries { coeffs, radius }
    }

    /// A polynomial, valid on the whole plane.
    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        Self::normalized(coeffs, f64::INFINITY)
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::polynomial(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self::polynomial(vec![ZERO])
    }

    pub fn constant(c: Complex64) -> Self {
        Self::polynomial(vec![c])
    }

    /// eₙ(z) = zⁿ.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![ZERO; n + 1];
        coeffs[n] = ONE;
        Self::polynomial(coeffs)
    }

    pub fn with_radius(mut self, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidRadius(radius));
        }
        self.radius = radius;
        Ok(self)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of zⁿ, zero past the stored degree.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or(ZERO)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == ZERO
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() > self.radius * (1.0 + 1e-12) {
            return Err(Error::OutsideRadius {
                z,
                radius: self.radius,
            });
        }
        Ok(self.horner(z))
    }

    /// Unchecked Horner evaluation of the truncated sum.
    pub(crate) fn horner(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Σ n |cₙ| r^{n−1}, a bound for |f′| on |z| ≤ r.
    pub fn derivative_bound(&self, r: f64) -> f64 {
        let mut power = 1.0;
        let mut total = 0.0;
        for (n, c) in self.coeffs.iter().enumerate().skip(1) {
            total += n as f64 * c.norm() * power;
            power *= r;
        }
        total
    }

    /// Σ |cₙ| rⁿ, a bound for |f| on |z| ≤ r.
    pub fn majorant(&self, r: f64) -> f64 {
        let mut power = 1.0;
        let mut total = 0.0;
        for c in &self.coeffs {
            total += c.norm() * power;
            power *= r;
        }
        total
    }

    pub fn derivative(&self) -> TaylorSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &c)| c * n as f64)
            .collect();
        Self::normalized(coeffs, self.radius)
    }

    /// Maximum of |f| on |z| = r: uniform samples, then one golden-section
    /// refinement around the best sample.
    pub fn sup_on_circle(&self, r: f64, samples: usize) -> Result<CircleSup> {
        if samples < 16 {
            return Err(Error::TooFewSamples {
                min: 16,
                got: samples,
            });
        }
        if !(r >= 0.0) {
            return Err(Error::InvalidRadius(r));
        }
        if r > self.radius {
            return Err(Error::OutsideRadius {
                z: Complex64::new(r, 0.0),
                radius: self.radius,
            });
        }
        let modulus = |t: f64| self.horner(Complex64::from_polar(r, t)).norm();
        let step = TAU / samples as f64;
        let (mut best_t, mut best) = (0.0, modulus(0.0));
        for j in 1..samples {
            let t = j as f64 * step;
            let v = modulus(t);
            if v > best {
                best = v;
                best_t = t;
            }
        }
        let (t, v) = golden_max(&modulus, best_t - step, best_t + step);
        if v > best {
            best = v;
            best_t = t;
        }
        Ok(CircleSup {
            value: best,
            error_bound: PI * r / samples as f64 * self.derivative_bound(r),
            argmax_angle: best_t.rem_euclid(TAU),
        })
    }

    /// Cauchy product, truncated at `self.degree() + other.degree()`.
    pub fn multiply(&self, other: &TaylorSeries) -> TaylorSeries {
        self.mul_truncated(other, self.degree() + other.degree())
    }

    pub fn mul_truncated(&self, other: &TaylorSeries, degree: usize) -> TaylorSeries {
        let mut out = vec![ZERO; degree + 1];
        for (i, &a) in self.coeffs.iter().enumerate().take(degree + 1) {
            if a == ZERO {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(degree + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Self::normalized(out, self.radius.min(other.radius))
    }

    pub fn truncate(&self, degree: usize) -> TaylorSeries {
        let coeffs = self.coeffs.iter().take(degree + 1).copied().collect();
        Self::normalized(coeffs, self.radius)
    }

    pub fn scale(&self, c: Complex64) -> TaylorSeries {
        Self::normalized(self.coeffs.iter().map(|&a| a * c).collect(), self.radius)
    }

    /// Σ cᵢ fᵢ; the radius is the smallest of the inputs.
    pub fn linear_combination(terms: &[(Complex64, &TaylorSeries)]) -> TaylorSeries {
        let len = terms.iter().map(|(_, f)| f.coeffs.len()).max().unwrap_or(1);
        let radius = terms
            .iter()
            .map(|(_, f)| f.radius)
            .fold(f64::INFINITY, f64::min);
        let mut out = vec![ZERO; len];
        for (c, f) in terms {
            for (o, &a) in out.iter_mut().zip(&f.coeffs) {
                *o += c * a;
            }
        }
        Self::normalized(out, radius)
    }

    /// f(βz): coefficient n is multiplied by βⁿ.
    pub fn compose_rotation(&self, beta: &RotationAngle) -> TaylorSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, &c)| c * beta.power(n as u64))
            .collect();
        Self::normalized(coeffs, self.radius)
    }

    /// f(sz): coefficient n is multiplied by sⁿ and the radius divided by s.
    pub fn rescale_argument(&self, s: f64) -> Result<TaylorSeries> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::InvalidInput(format!("rescale factor {s} must be positive")));
        }
        let mut power = 1.0;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                let out = c * power;
                power *= s;
                out
            })
            .collect();
        Ok(Self::normalized(coeffs, self.radius / s))
    }

    /// Largest per-coefficient difference over indices `0..=degree`.
    pub fn max_coeff_diff(&self, other: &TaylorSeries, degree: usize) -> f64 {
        (0..=degree)
            .map(|n| (self.coeff(n) - other.coeff(n)).norm())
            .fold(0.0, f64::max)
    }

    /// Largest coefficient modulus past index `from`.
    pub fn tail_norm(&self, from: usize) -> f64 {
        self.coeffs
            .iter()
            .skip(from)
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Formal quotient self/other up to `degree`. Requires
    /// |other(0)| > `1e-12`.
    pub fn divide(&self, other: &TaylorSeries, degree: usize) -> Result<TaylorSeries> {
        let pivot = other.coeff(0);
        if pivot.norm() <= PIVOT_TOL {
            return Err(Error::StructureMismatch(format!(
                "division pivot {pivot} vanishes"
            )));
        }
        let mut q = vec![ZERO; degree + 1];
        for n in 0..=degree {
            let mut acc = self.coeff(n);
            for k in 1..=n.min(other.degree()) {
                acc -= other.coeffs[k] * q[n - k];
            }
            q[n] = acc / pivot;
        }
        Ok(Self::normalized(q, self.radius.min(other.radius)))
    }

    /// Index of the first coefficient with modulus above `tol`.
    pub fn order_at_origin(&self, tol: f64) -> Option<usize> {
        self.coeffs.iter().position(|c| c.norm() > tol)
    }

    /// f(z)/zᵏ, dropping the first k coefficients.
    pub fn shift_down(&self, k: usize) -> TaylorSeries {
        Self::normalized(self.coeffs.iter().skip(k).copied().collect(), self.radius)
    }

    /// zᵏ f(z).
    pub fn shift_up(&self, k: usize) -> TaylorSeries {
        let mut coeffs = vec![ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        Self::normalized(coeffs, self.radius)
    }

    pub fn powi(&self, n: usize, degree: usize) -> TaylorSeries {
        let mut out = TaylorSeries::constant(ONE).with_radius_unchecked(self.radius);
        for _ in 0..n {
            out = out.mul_truncated(self, degree);
        }
        out
    }

    pub(crate) fn with_radius_unchecked(mut self, radius: f64) -> Self {
        self.radius = radius;
        self
    }

    /// Logarithm m̃ with exp(m̃) = m up to `degree`, on the principal branch
    /// at the origin. Requires m(0) ≠ 0 and winding number 0 of m around 0
    /// on the circle of its radius (or the unit circle when the radius is
    /// infinite).
    pub fn log_series(&self, degree: usize) -> Result<TaylorSeries> {
        let m0 = self.coeff(0);
        if m0 == ZERO {
            return Err(Error::VanishingConstantTerm);
        }
        let check_radius = if self.radius.is_finite() {
            self.radius
        } else {
            1.0
        };
        let winding = winding_on_circle(self, check_radius)?;
        if winding != 0 {
            return Err(Error::NonZeroWinding {
                winding,
                radius: check_radius,
            });
        }
        // n m_n = Σ_{k=1}^{n} k l_k m_{n−k}
        let mut l = vec![ZERO; degree + 1];
        l[0] = m0.ln();
        for n in 1..=degree {
            let mut acc = self.coeff(n) * n as f64;
            for k in 1..n {
                acc -= l[k] * k as f64 * self.coeff(n - k);
            }
            l[n] = acc / (m0 * n as f64);
        }
        Ok(Self::normalized(l, self.radius))
    }

    /// exp(g) up to `degree`.
    pub fn exp_series(&self, degree: usize) -> TaylorSeries {
        // n e_n = Σ_{k=1}^{n} k g_k e_{n−k}
        let mut e = vec![ZERO; degree + 1];
        e[0] = self.coeff(0).exp();
        for n in 1..=degree {
            let mut acc = ZERO;
            for k in 1..=n.min(self.degree()) {
                acc += self.coeffs[k] * k as f64 * e[n - k];
            }
            e[n] = acc / n as f64;
        }
        Self::normalized(e, self.radius)
    }
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > 1e-13 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

impl Add for &TaylorSeries {
    type Output = TaylorSeries;

    fn add(self, rhs: &TaylorSeries) -> TaylorSeries {
        TaylorSeries::linear_combination(&[(ONE, self), (ONE, rhs)])
    }
}

impl Sub for &TaylorSeries {
    type Output = TaylorSeries;

    fn sub(self, rhs: &TaylorSeries) -> TaylorSeries {
        TaylorSeries::linear_combination(&[(ONE, self), (-ONE, rhs)])
    }
}

impl Mul for &TaylorSeries {
    type Output = TaylorSeries;

    fn mul(self, rhs: &TaylorSeries) -> TaylorSeries {
        self.multiply(rhs)
    }
}

impl Mul<Complex64> for &TaylorSeries {
    type Output = TaylorSeries;

    fn mul(self, rhs: Complex64) -> TaylorSeries {
        self.scale(rhs)
    }
}

impl Neg for &TaylorSeries {
    type Output = TaylorSeries;

    fn neg(self) -> TaylorSeries {
        self.scale(-ONE)
    }
}

/// Wire form: `{"coeffs": [[re, im], ...], "radius": number}`. A missing
/// radius means the series is a polynomial valid everywhere.
#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    coeffs: Vec<Complex64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
}

impl TryFrom<SeriesRepr> for TaylorSeries {
    type Error = Error;

    fn try_from(repr: SeriesRepr) -> Result<Self> {
        TaylorSeries::new(repr.coeffs, repr.radius.unwrap_or(f64::INFINITY))
    }
}

impl From<TaylorSeries> for SeriesRepr {
    fn from(f: TaylorSeries) -> Self {
        SeriesRepr {
            radius: f.radius.is_finite().then_some(f.radius),
            coeffs: f.coeffs,
        }
    }
}
