//! Finite Blaschke products, the boundary-modulus dichotomy for self-maps of
//! the closed disc, and rotation rigidity.

pub mod winding;
pub mod zeros;

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TaylorSeries;
use crate::tolerance::{BOUNDARY_TOL, POLE_GUARD, STRUCTURE_TOL};

pub use winding::{circle, winding_number, winding_on_circle};
pub use zeros::locate_zeros;

/// Samples taken on the unit circle by [`detect_boundary_set`].
pub const BOUNDARY_SAMPLES: usize = 4096;

/// Zeros found closer than this to the origin are counted in `origin_order`.
const ORIGIN_ZERO: f64 = 1e-6;

/// e^{iθ} z^N ∏ (z − αᵢ)/(1 − ᾱᵢ z).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlaschkeRepr", into = "BlaschkeRepr")]
pub struct BlaschkeProduct {
    theta: f64,
    origin_order: u32,
    zeros: Vec<Complex64>,
}

impl BlaschkeProduct {
    /// Zeros are listed with repetition for multiplicity and must satisfy
    /// 0 < |α| < 1.
    pub fn new(theta: f64, origin_order: u32, mut zeros: Vec<Complex64>) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::InvalidInput(format!("theta {theta} is not finite")));
        }
        if let Some(&bad) = zeros.iter().find(|a| !(a.norm() > 0.0 && a.norm() < 1.0)) {
            return Err(Error::InvalidZero(bad));
        }
        zeros.sort_by(|a, b| a.re.total_cmp(&b.re).then_with(|| a.im.total_cmp(&b.im)));
        Ok(BlaschkeProduct {
            theta: theta.rem_euclid(TAU),
            origin_order,
            zeros,
        })
    }

    /// e^{iθ} zⁿ.
    pub fn monomial(theta: f64, n: u32) -> Self {
        BlaschkeProduct {
            theta: theta.rem_euclid(TAU),
            origin_order: n,
            zeros: Vec::new(),
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn origin_order(&self) -> u32 {
        self.origin_order
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    /// Number of zeros counted with multiplicity, including the origin.
    pub fn degree(&self) -> usize {
        self.origin_order as usize + self.zeros.len()
    }

    /// A unimodular constant (no zeros at all).
    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    /// Smallest modulus of a pole 1/ᾱᵢ; infinite without off-origin zeros.
    pub fn pole_radius(&self) -> f64 {
        self.zeros
            .iter()
            .map(|a| 1.0 / a.norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let mut value = Complex64::from_polar(1.0, self.theta) * z.powu(self.origin_order);
        for &a in &self.zeros {
            let pole = 1.0 / a.conj();
            if (z - pole).norm() < POLE_GUARD {
                return Err(Error::PoleProximity { z, pole });
            }
            value *= (z - a) / (1.0 - a.conj() * z);
        }
        Ok(value)
    }

    /// Taylor expansion at the origin up to `degree`, declared valid on
    /// |z| ≤ `radius` (which must stay inside the nearest pole).
    pub fn expand(&self, degree: usize, radius: f64) -> Result<TaylorSeries> {
        let pole_radius = self.pole_radius();
        if !(radius > 0.0) {
            return Err(Error::InvalidRadius(radius));
        }
        if radius >= pole_radius {
            return Err(Error::BeyondPole {
                radius,
                pole_radius,
            });
        }
        let n = self.origin_order as usize;
        let mut out = vec![Complex64::new(0.0, 0.0); degree + 1];
        if n <= degree {
            out[n] = Complex64::from_polar(1.0, self.theta);
        }
        let mut series = TaylorSeries::polynomial(out);
        for &a in &self.zeros {
            series = series.mul_truncated(&mobius_factor(a, degree), degree);
        }
        series.with_radius(radius)
    }
}

/// (z − α)/(1 − ᾱz) = −α + Σ_{k≥1} ᾱ^{k−1}(1 − |α|²) zᵏ.
fn mobius_factor(a: Complex64, degree: usize) -> TaylorSeries {
    let mut coeffs = Vec::with_capacity(degree + 1);
    coeffs.push(-a);
    let scale = 1.0 - a.norm_sqr();
    let mut power = Complex64::new(1.0, 0.0);
    for _ in 1..=degree {
        coeffs.push(power * scale);
        power *= a.conj();
    }
    TaylorSeries::polynomial(coeffs)
}

#[derive(Serialize, Deserialize)]
struct BlaschkeRepr {
    theta: f64,
    origin_order: u32,
    zeros: Vec<Complex64>,
}

impl TryFrom<BlaschkeRepr> for BlaschkeProduct {
    type Error = Error;

    fn try_from(repr: BlaschkeRepr) -> Result<Self> {
        BlaschkeProduct::new(repr.theta, repr.origin_order, repr.zeros)
    }
}

impl From<BlaschkeProduct> for BlaschkeRepr {
    fn from(b: BlaschkeProduct) -> Self {
        BlaschkeRepr {
            theta: b.theta,
            origin_order: b.origin_order,
            zeros: b.zeros,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryVerdict {
    FiniteSet,
    AllOfCircle,
}

/// Where |g| = 1 on the unit circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryModulusReport {
    pub verdict: BoundaryVerdict,
    /// Angles in [0, 2π) where |g| reaches 1 (finite case).
    pub witness_points: Vec<f64>,
    pub certified_blaschke: Option<BlaschkeProduct>,
}

/// Decides whether {ξ ∈ 𝕋 : |g(ξ)| = 1} is finite or all of 𝕋, and in the
/// latter case reconstructs g as a finite Blaschke product from its zeros.
pub fn detect_boundary_set(g: &TaylorSeries) -> Result<BoundaryModulusReport> {
    if !(g.radius() > 1.0) {
        return Err(Error::NotAnalyticPastCircle(g.radius()));
    }
    let moduli: Vec<f64> = circle(1.0, BOUNDARY_SAMPLES)
        .into_iter()
        .map(|z| g.horner(z).norm())
        .collect();
    let max = moduli.iter().copied().fold(0.0, f64::max);
    if max > 1.0 + BOUNDARY_TOL {
        return Err(Error::ModulusExceedsOne(max));
    }
    let min = moduli.iter().copied().fold(f64::INFINITY, f64::min);
    if min >= 1.0 - BOUNDARY_TOL {
        let product = reconstruct(g)?;
        return Ok(BoundaryModulusReport {
            verdict: BoundaryVerdict::AllOfCircle,
            witness_points: Vec::new(),
            certified_blaschke: Some(product),
        });
    }

    let near: Vec<bool> = moduli.iter().map(|&m| m > 1.0 - BOUNDARY_TOL).collect();
    let count = near.iter().filter(|&&b| b).count();
    let fraction = count as f64 / BOUNDARY_SAMPLES as f64;
    if fraction >= 0.01 {
        return Err(Error::BoundarySetUndecided { fraction });
    }
    let step = TAU / BOUNDARY_SAMPLES as f64;
    let witness_points = clusters(&near)
        .into_iter()
        .map(|indices| {
            let best = indices
                .iter()
                .copied()
                .max_by(|&a, &b| moduli[a].total_cmp(&moduli[b]))
                .expect("clusters are nonempty");
            refine_peak(g, best as f64 * step, step).rem_euclid(TAU)
        })
        .collect();
    Ok(BoundaryModulusReport {
        verdict: BoundaryVerdict::FiniteSet,
        witness_points,
        certified_blaschke: None,
    })
}

/// Runs of consecutive flagged indices, joined across the wrap-around.
fn clusters(flags: &[bool]) -> Vec<Vec<usize>> {
    let n = flags.len();
    let Some(start) = (0..n).find(|&i| !flags[i]) else {
        return vec![(0..n).collect()];
    };
    let mut out = Vec::new();
    let mut current = Vec::new();
    for k in 1..=n {
        let i = (start + k) % n;
        if flags[i] {
            current.push(i);
        } else if !current.is_empty() {
            out.push(std::mem::take(&mut current));
        }
    }
    out
}

fn refine_peak(g: &TaylorSeries, t: f64, h: f64) -> f64 {
    let modulus = |t: f64| g.horner(Complex64::from_polar(1.0, t)).norm();
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (t - h, t + h);
    while b - a > 1e-12 {
        let c = b - ratio * (b - a);
        let d = a + ratio * (b - a);
        if modulus(c) > modulus(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let refined = 0.5 * (a + b);
    if modulus(refined) >= modulus(t) {
        refined
    } else {
        t
    }
}

/// Blaschke product with the zeros of g in 𝔻 and the phase of g(1), checked
/// against g coefficient by coefficient.
fn reconstruct(g: &TaylorSeries) -> Result<BlaschkeProduct> {
    let found = locate_zeros(g, 1.0)?;
    let mut origin_order = 0u32;
    let mut zeros = Vec::new();
    for (z, multiplicity) in found {
        if z.norm() < ORIGIN_ZERO {
            origin_order += multiplicity as u32;
        } else {
            zeros.extend(std::iter::repeat_n(z, multiplicity));
        }
    }
    let unrotated = BlaschkeProduct::new(0.0, origin_order, zeros)?;
    let one = Complex64::new(1.0, 0.0);
    let theta = (g.horner(one) / unrotated.eval(one)?).arg();
    let product = BlaschkeProduct::new(theta, origin_order, unrotated.zeros)?;
    let expansion = product.expand(g.degree(), 1.0)?;
    let mismatch = expansion.max_coeff_diff(g, g.degree());
    if mismatch > 1e-7 {
        return Err(Error::CertificationFailed(mismatch));
    }
    Ok(product)
}

/// Whether a self-map of the closed disc that maps 𝕋 onto 𝕋 and a slightly
/// larger disc into itself is a rotation e^{iθ}z.
///
/// Certified Blaschke products other than rotations return `false`: those
/// cannot map the larger disc into itself.
pub fn is_rotation(f: &TaylorSeries) -> Result<bool> {
    if !(f.radius() > 1.0) {
        return Err(Error::NotAnalyticPastCircle(f.radius()));
    }
    let off_circle = circle(1.0, BOUNDARY_SAMPLES)
        .into_iter()
        .map(|z| (f.horner(z).norm() - 1.0).abs())
        .fold(0.0, f64::max);
    if off_circle > BOUNDARY_TOL {
        return Err(Error::HypothesisViolated(format!(
            "image of the unit circle leaves the circle by {off_circle:e}"
        )));
    }
    let winding = winding_on_circle(f, 1.0)?;
    if winding < 1 {
        return Err(Error::HypothesisViolated(
            "image of the closed disc does not fill the unit circle".into(),
        ));
    }
    let report = detect_boundary_set(f)?;
    let product = report
        .certified_blaschke
        .ok_or_else(|| Error::HypothesisViolated("boundary set is not the whole circle".into()))?;
    if product.origin_order != 1 || !product.zeros.is_empty() {
        return Ok(false);
    }
    let rotation = TaylorSeries::polynomial(vec![
        Complex64::new(0.0, 0.0),
        Complex64::from_polar(1.0, product.theta),
    ]);
    if f.max_coeff_diff(&rotation, f.degree().max(1)) > STRUCTURE_TOL {
        return Ok(false);
    }
    let outer = if f.radius().is_finite() {
        f.radius()
    } else {
        2.0
    };
    let sup = f.sup_on_circle(outer, 256)?;
    if sup.value > outer + sup.error_bound + BOUNDARY_TOL {
        return Err(Error::HypothesisViolated(format!(
            "image of |z| = {outer} leaves the disc of the same radius"
        )));
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_examples() {
        let rot = BlaschkeProduct::monomial(0.3, 1);
        let v = rot.eval(c(1.0, 0.0)).unwrap();
        assert!((v - Complex64::from_polar(1.0, 0.3)).norm() < 1e-15);
        let b = BlaschkeProduct::new(0.0, 0, vec![c(0.5, 0.0)]).unwrap();
        assert_abs_diff_eq!(b.eval(c(0.0, 0.0)).unwrap().re, -0.5, epsilon = 1e-15);
        for z in circle(1.0, 32) {
            assert_abs_diff_eq!(b.eval(z).unwrap().norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn eval_rejects_pole() {
        let b = BlaschkeProduct::new(0.0, 0, vec![c(0.5, 0.0)]).unwrap();
        assert!(matches!(
            b.eval(c(2.0, 0.0)),
            Err(Error::PoleProximity { .. })
        ));
    }

    #[test]
    fn rejects_bad_zeros() {
        assert!(BlaschkeProduct::new(0.0, 0, vec![c(1.0, 0.0)]).is_err());
        assert!(BlaschkeProduct::new(0.0, 0, vec![c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn expand_examples() {
        let z2 = BlaschkeProduct::monomial(0.0, 2).expand(4, 1.0).unwrap();
        assert_eq!(z2, TaylorSeries::monomial(2).with_radius(1.0).unwrap());
        // (z − 1/2)/(1 − z/2) = −1/2 + (3/4) z + (3/8) z² + (3/16) z³ + …
        let b = BlaschkeProduct::new(0.0, 0, vec![c(0.5, 0.0)]).unwrap();
        let s = b.expand(6, 1.5).unwrap();
        for (n, expected) in [(0, -0.5), (1, 0.75), (2, 0.375), (3, 0.1875)] {
            assert_abs_diff_eq!(s.coeff(n).re, expected, epsilon = 1e-15);
        }
        assert!(matches!(
            b.expand(6, 2.0),
            Err(Error::BeyondPole { .. })
        ));
    }

    #[test]
    fn boundary_set_of_monomial() {
        let g = TaylorSeries::monomial(3);
        let report = detect_boundary_set(&g).unwrap();
        assert_eq!(report.verdict, BoundaryVerdict::AllOfCircle);
        let b = report.certified_blaschke.unwrap();
        assert_eq!(b.origin_order(), 3);
        assert!(b.zeros().is_empty());
        assert_abs_diff_eq!(principal(b.theta()), 0.0, epsilon = 1e-12);
    }

    fn principal(t: f64) -> f64 {
        let t = t.rem_euclid(std::f64::consts::TAU);
        if t > std::f64::consts::PI {
            t - std::f64::consts::TAU
        } else {
            t
        }
    }

    #[test]
    fn boundary_set_of_half_one_plus_z() {
        let g = TaylorSeries::from_real(&[0.5, 0.5]);
        let report = detect_boundary_set(&g).unwrap();
        assert_eq!(report.verdict, BoundaryVerdict::FiniteSet);
        assert_eq!(report.witness_points.len(), 1);
        assert_abs_diff_eq!(principal(report.witness_points[0]), 0.0, epsilon = 1e-6);
    }

    #[test]
    fn boundary_set_of_contraction_is_empty() {
        let g = TaylorSeries::from_real(&[0.0, 0.9]);
        let report = detect_boundary_set(&g).unwrap();
        assert_eq!(report.verdict, BoundaryVerdict::FiniteSet);
        assert!(report.witness_points.is_empty());
    }

    #[test]
    fn boundary_set_hypotheses() {
        let g = TaylorSeries::from_real(&[0.0, 1.1]);
        assert!(matches!(
            detect_boundary_set(&g),
            Err(Error::ModulusExceedsOne(_))
        ));
        let h = TaylorSeries::monomial(1).with_radius(1.0).unwrap();
        assert!(matches!(
            detect_boundary_set(&h),
            Err(Error::NotAnalyticPastCircle(_))
        ));
    }

    #[test]
    fn rotation_rigidity() {
        let iz = TaylorSeries::polynomial(vec![c(0.0, 0.0), c(0.0, 1.0)]);
        assert!(is_rotation(&iz).unwrap());
        assert!(!is_rotation(&TaylorSeries::monomial(2)).unwrap());
        let mobius = BlaschkeProduct::new(0.0, 0, vec![c(0.2, 0.0)])
            .unwrap()
            .expand(64, 1.5)
            .unwrap();
        assert!(!is_rotation(&mobius).unwrap());
    }

    #[test]
    fn rotation_requires_circle_to_circle() {
        let f = TaylorSeries::from_real(&[0.0, 0.5]);
        assert!(matches!(
            is_rotation(&f),
            Err(Error::HypothesisViolated(_))
        ));
    }
}
