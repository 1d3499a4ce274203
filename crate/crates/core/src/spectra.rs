//! Spectra and point spectra of the isometries T_{α,β} and of the operators
//! f ↦ B(z/r) f(βz) with a finite Blaschke product B.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angle::RotationAngle;
use crate::blaschke::winding::{segment, whole_turns};
use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::series::TaylorSeries;
use crate::tolerance::MEMBERSHIP_GUARD;
use crate::wco::{Symbol, WCOp, Weight};

/// Base samples of the curve t ↦ m_N(e^{it}) before adaptive refinement.
pub const CURVE_SAMPLES: usize = 8192;

/// Distinctness and unimodularity tolerance for finite spectra.
const POINT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    Inside,
    Outside,
    BoundaryUndecided,
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Membership::Inside => "inside",
            Membership::Outside => "outside",
            Membership::BoundaryUndecided => "boundary-undecided",
        })
    }
}

/// The orbit {αβᵏ : k ≥ 0}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Orbit {
    pub alpha: Complex64,
    pub beta: RotationAngle,
}

/// Refinement of the spectrum of an aperiodic isometry under a
/// user-asserted Diophantine condition on the angle. Never verified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiophantineRefinement {
    pub tau: f64,
    pub gamma: f64,
    pub statement: String,
}

/// Spectral membership region {λ : λᴺ ∈ m_N(𝔻)} for a periodic rotation
/// with weight m(z) = B(z/r).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub blaschke: BlaschkeProduct,
    pub r: f64,
    pub beta: RotationAngle,
    pub period: u64,
    /// (sup_𝕋 |m_N|)^{1/N}: every λ beyond it is outside.
    pub outer_radius: f64,
    pub inner_points: String,
    pub point_spectrum: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SpectrumReport {
    /// σ = σ_p is a finite set.
    FiniteSet {
        points: Vec<Complex64>,
        point_spectrum: Vec<Complex64>,
    },
    /// σ_p is the orbit of the generator, dense in 𝕋, and σ ⊂ 𝕋.
    CircleDense {
        point_spectrum_generator: Orbit,
        outer_set_note: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        diophantine_refinement: Option<DiophantineRefinement>,
    },
    Region(Region),
    /// {βⁿB(0)} ⊂ σ ⊂ D(0, outer_radius) with empty point spectrum.
    AnnulusBounded {
        inner_dense_circle_radius: f64,
        generator: Orbit,
        outer_radius: f64,
        zero_count: usize,
        note: String,
        point_spectrum: Vec<Complex64>,
    },
}

/// Spectrum of T_{α,β} f = α f(βz).
pub fn spectrum_isometry(alpha: Complex64, beta: &RotationAngle) -> Result<SpectrumReport> {
    if (alpha.norm() - 1.0).abs() > POINT_TOL {
        return Err(Error::NotUnimodular(alpha));
    }
    Ok(match beta.period() {
        Some(period) => {
            let points: Vec<Complex64> = (0..period).map(|k| alpha * beta.power(k)).collect();
            SpectrumReport::FiniteSet {
                point_spectrum: points.clone(),
                points,
            }
        }
        None => SpectrumReport::CircleDense {
            point_spectrum_generator: Orbit {
                alpha,
                beta: beta.clone(),
            },
            outer_set_note: "spectrum is contained in the unit circle".into(),
            diophantine_refinement: beta.diophantine().map(|d| DiophantineRefinement {
                tau: d.tau,
                gamma: d.gamma,
                statement: "σ ⊂ {e^{2iπx} : x ∉ ℚ} ∪ {1}".into(),
            }),
        },
    })
}

fn check_weight(b: &BlaschkeProduct, r: f64) -> Result<()> {
    Weight::blaschke(b.clone(), r).map(|_| ())
}

/// Spectrum of f ↦ B(z/r) f(βz) for β of exact period N.
pub fn spectrum_blaschke_periodic(
    b: &BlaschkeProduct,
    r: f64,
    beta: &RotationAngle,
) -> Result<SpectrumReport> {
    check_weight(b, r)?;
    let period = beta.period().ok_or(Error::NotPeriodic)?;
    if b.is_constant() {
        return spectrum_isometry(Complex64::from_polar(1.0, b.theta()), beta);
    }
    let mut region = Region {
        blaschke: b.clone(),
        r,
        beta: beta.clone(),
        period,
        outer_radius: 0.0,
        inner_points: "point spectrum is empty: the weight vanishes in the disc".into(),
        point_spectrum: Vec::new(),
    };
    let curve = RegionCurve::new(&region);
    let sup = curve
        .samples
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    region.outer_radius = (sup * (1.0 + MEMBERSHIP_GUARD)).powf(1.0 / period as f64);
    Ok(SpectrumReport::Region(region))
}

/// Spectrum bounds of f ↦ B(z/r) f(βz) for an aperiodic β.
pub fn spectrum_blaschke_aperiodic(
    b: &BlaschkeProduct,
    r: f64,
    beta: &RotationAngle,
) -> Result<SpectrumReport> {
    check_weight(b, r)?;
    if beta.is_periodic() {
        return Err(Error::InvalidAngle("an aperiodic angle is required".into()));
    }
    if b.is_constant() {
        return spectrum_isometry(Complex64::from_polar(1.0, b.theta()), beta);
    }
    let d = b.degree();
    let b0 = b.eval(Complex64::new(0.0, 0.0))?;
    Ok(SpectrumReport::AnnulusBounded {
        inner_dense_circle_radius: b0.norm(),
        generator: Orbit {
            alpha: b0,
            beta: beta.clone(),
        },
        outer_radius: r.powi(-(d as i32)),
        zero_count: d,
        note: "the orbit of B(0) is dense in the circle about 0 of radius |B(0)|".into(),
        point_spectrum: Vec::new(),
    })
}

/// Spectrum report for an isometry or a Blaschke-weight operator.
pub fn spectrum_of(op: &WCOp) -> Result<SpectrumReport> {
    let Symbol::Rotation(beta) = op.symbol() else {
        return Err(Error::NotRotationSymbol);
    };
    match op.weight() {
        Weight::Series(m) if m.degree() == 0 => spectrum_isometry(m.coeff(0), beta),
        Weight::Blaschke { product, r } if beta.is_periodic() => {
            spectrum_blaschke_periodic(product, *r, beta)
        }
        Weight::Blaschke { product, r } => spectrum_blaschke_aperiodic(product, *r, beta),
        Weight::Series(_) => Err(Error::HypothesisViolated(
            "spectra are computed for isometries and Blaschke weights only".into(),
        )),
    }
}

/// Eigenvalues m(0)βᵏ, k ≤ n, of the truncation of W to polynomials of
/// degree ≤ n.
pub fn point_spectrum_oracle(op: &WCOp, n: usize) -> Result<Vec<Complex64>> {
    let matrix = op.truncation_matrix(n)?;
    Ok((0..=n).map(|k| matrix[(k, k)]).collect())
}

/// Samples of t ↦ m_N(e^{2πit}) with exact evaluation for refinement.
struct RegionCurve<'a> {
    region: &'a Region,
    rotations: Vec<Complex64>,
    samples: Vec<Complex64>,
}

impl<'a> RegionCurve<'a> {
    fn new(region: &'a Region) -> Self {
        let rotations = (0..region.period).map(|j| region.beta.power(j)).collect();
        let mut curve = RegionCurve {
            region,
            rotations,
            samples: Vec::new(),
        };
        curve.samples = (0..CURVE_SAMPLES)
            .map(|j| curve.eval(j as f64 / CURVE_SAMPLES as f64))
            .collect();
        curve
    }

    /// m_N(e^{2πit}) = ∏_j B(βʲe^{2πit}/r).
    fn eval(&self, t: f64) -> Complex64 {
        let z = Complex64::from_polar(1.0 / self.region.r, TAU * t);
        self.rotations
            .iter()
            .map(|rot| {
                self.region
                    .blaschke
                    .eval(rot * z)
                    .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
            })
            .product()
    }

    /// Winding of m_N(𝕋) around λᴺ, refined adaptively between samples.
    fn membership(&self, lambda: Complex64) -> Membership {
        let target = lambda.powu(self.region.period as u32);
        let g = |t: f64| (self.eval(t) - target, MEMBERSHIP_GUARD);
        let n = self.samples.len();
        let mut total = 0.0;
        let mut min_modulus = f64::INFINITY;
        for j in 0..n {
            let (t0, t1) = (j as f64 / n as f64, (j + 1) as f64 / n as f64);
            let g0 = (self.samples[j] - target, MEMBERSHIP_GUARD);
            let g1 = (self.samples[(j + 1) % n] - target, MEMBERSHIP_GUARD);
            match segment(&g, (t0, g0), (t1, g1), 0, &mut min_modulus) {
                Ok(step) => total += step,
                Err(_) => return Membership::BoundaryUndecided,
            }
        }
        match whole_turns(total) {
            Ok(k) if k >= 1 => Membership::Inside,
            Ok(0) => Membership::Outside,
            _ => Membership::BoundaryUndecided,
        }
    }
}

/// Membership queries against a report. A Region report caches its curve.
pub struct MembershipOracle<'a> {
    report: &'a SpectrumReport,
    curve: Option<RegionCurve<'a>>,
}

impl<'a> MembershipOracle<'a> {
    pub fn new(report: &'a SpectrumReport) -> Self {
        let curve = match report {
            SpectrumReport::Region(region) => Some(RegionCurve::new(region)),
            _ => None,
        };
        MembershipOracle { report, curve }
    }

    pub fn classify(&self, lambda: Complex64) -> Membership {
        let guard = MEMBERSHIP_GUARD;
        match self.report {
            SpectrumReport::FiniteSet { points, .. } => {
                let distance = points
                    .iter()
                    .map(|p| (p - lambda).norm())
                    .fold(f64::INFINITY, f64::min);
                if distance <= POINT_TOL {
                    Membership::Inside
                } else if distance <= guard {
                    Membership::BoundaryUndecided
                } else {
                    Membership::Outside
                }
            }
            SpectrumReport::CircleDense { .. } => {
                if (lambda.norm() - 1.0).abs() > guard {
                    Membership::Outside
                } else {
                    Membership::BoundaryUndecided
                }
            }
            SpectrumReport::Region(region) => {
                if lambda.norm() > region.outer_radius * (1.0 + guard) {
                    return Membership::Outside;
                }
                self.curve
                    .as_ref()
                    .map_or(Membership::BoundaryUndecided, |c| c.membership(lambda))
            }
            SpectrumReport::AnnulusBounded {
                inner_dense_circle_radius,
                outer_radius,
                ..
            } => {
                let modulus = lambda.norm();
                if modulus > outer_radius * (1.0 + guard) {
                    Membership::Outside
                } else if (modulus - inner_dense_circle_radius).abs() <= POINT_TOL {
                    Membership::Inside
                } else {
                    Membership::BoundaryUndecided
                }
            }
        }
    }
}

/// Membership of a single point.
pub fn classify_point(report: &SpectrumReport, lambda: Complex64) -> Membership {
    MembershipOracle::new(report).classify(lambda)
}

/// Axis-aligned window [x0, x1] × [y0, y1] of the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

/// Membership on a `width` × `height` grid over the window, row-major from
/// (x0, y0): rows advance in y, columns in x.
pub fn membership_grid(
    report: &SpectrumReport,
    width: usize,
    height: usize,
    window: Window,
) -> Result<Vec<(Complex64, Membership)>> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidInput("grid dimensions must be positive".into()));
    }
    let coordinate = |a: f64, b: f64, i: usize, n: usize| {
        if n == 1 {
            a
        } else {
            a + (b - a) * i as f64 / (n - 1) as f64
        }
    };
    let oracle = MembershipOracle::new(report);
    let mut cells = Vec::with_capacity(width * height);
    for row in 0..height {
        let y = coordinate(window.y0, window.y1, row, height);
        for col in 0..width {
            let lambda = Complex64::new(coordinate(window.x0, window.x1, col, width), y);
            cells.push((lambda, oracle.classify(lambda)));
        }
    }
    Ok(cells)
}

/// m_N as a truncated series, for cross-checks against the exact curve.
pub fn region_weight_product(region: &Region, degree: usize) -> Result<TaylorSeries> {
    WCOp::new(
        Weight::blaschke(region.blaschke.clone(), region.r)?,
        Symbol::Rotation(region.beta.clone()),
    )?
    .with_degree(degree)
    .weight_product()
}
