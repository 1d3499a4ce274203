//! The disc automorphism ψ(z) = (α − z)/(1 − ᾱz).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TaylorSeries;
use crate::tolerance::POLE_GUARD;

/// ψ_α, an involution of the disc exchanging α and 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MobiusRepr", into = "MobiusRepr")]
pub struct MobiusInvolution {
    alpha: Complex64,
}

impl MobiusInvolution {
    pub fn new(alpha: Complex64) -> Result<Self> {
        if !(alpha.norm() < 1.0) {
            return Err(Error::FixedPointOutsideDisc(alpha));
        }
        Ok(MobiusInvolution { alpha })
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    /// Modulus of the pole 1/ᾱ; infinite for α = 0.
    pub fn pole_radius(&self) -> f64 {
        1.0 / self.alpha.norm()
    }

    pub fn apply(&self, z: Complex64) -> Result<Complex64> {
        let denominator = Complex64::new(1.0, 0.0) - self.alpha.conj() * z;
        if denominator.norm() < POLE_GUARD {
            return Err(Error::PoleProximity {
                z,
                pole: 1.0 / self.alpha.conj(),
            });
        }
        Ok((self.alpha - z) / denominator)
    }

    /// Taylor expansion α − (1 − |α|²) Σ_{k≥1} ᾱ^{k−1} zᵏ, declared valid
    /// halfway (geometrically) between 𝕋 and the pole.
    pub fn series(&self, degree: usize) -> TaylorSeries {
        let scale = 1.0 - self.alpha.norm_sqr();
        let mut coeffs = Vec::with_capacity(degree + 1);
        coeffs.push(self.alpha);
        let mut power = Complex64::new(1.0, 0.0);
        for _ in 1..=degree {
            coeffs.push(-power * scale);
            power *= self.alpha.conj();
        }
        TaylorSeries::polynomial(coeffs).with_radius_unchecked(self.pole_radius().sqrt())
    }

    /// Largest s such that ψ maps the closed disc of radius s into the
    /// closed disc of radius `radius`.
    pub fn preimage_radius(&self, radius: f64) -> f64 {
        let a = self.alpha.norm();
        if a == 0.0 {
            return radius;
        }
        if radius.is_infinite() {
            return self.pole_radius();
        }
        if radius >= 1.0 {
            (radius + a) / (1.0 + radius * a)
        } else {
            (radius - a) / (1.0 - radius * a)
        }
    }

    /// The series f∘ψ up to `degree`, by Horner's scheme in ψ.
    pub fn compose(&self, f: &TaylorSeries, degree: usize) -> Result<TaylorSeries> {
        let valid = self
            .preimage_radius(f.radius())
            .min(self.pole_radius().sqrt());
        if !(valid > 0.0) {
            return Err(Error::InvalidRadius(f.radius()));
        }
        let psi = self.series(degree);
        let mut acc = TaylorSeries::constant(f.coeff(f.degree()));
        for n in (0..f.degree()).rev() {
            acc = acc.mul_truncated(&psi, degree);
            acc = &acc + &TaylorSeries::constant(f.coeff(n));
        }
        Ok(acc.truncate(degree).with_radius_unchecked(valid))
    }
}

#[derive(Serialize, Deserialize)]
struct MobiusRepr {
    alpha: Complex64,
}

impl TryFrom<MobiusRepr> for MobiusInvolution {
    type Error = Error;

    fn try_from(repr: MobiusRepr) -> Result<Self> {
        MobiusInvolution::new(repr.alpha)
    }
}

impl From<MobiusInvolution> for MobiusRepr {
    fn from(psi: MobiusInvolution) -> Self {
        MobiusRepr { alpha: psi.alpha }
    }
}
