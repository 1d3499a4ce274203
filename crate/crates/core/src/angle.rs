//! Rotation multipliers β = e^{2πi x} on the unit circle.
//!
//! Periodicity is a property of the representation: a rational angle p/q in
//! lowest terms has period exactly q, an irrational angle is aperiodic. No
//! floating-point test of βᴺ = 1 is ever made.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// User-asserted Diophantine data (τ, γ) for an irrational angle. It is
/// carried as metadata only and never verified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diophantine {
    pub tau: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AngleRepr", into = "AngleRepr")]
pub enum RotationAngle {
    /// β = e^{2πi p/q}, with 0 ≤ p < q and gcd(p, q) = 1.
    Rational { p: u64, q: u64 },
    /// β = e^{2πi x}, x ∈ [0, 1), asserted irrational by the caller.
    Irrational {
        x: f64,
        diophantine: Option<Diophantine>,
    },
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// e^{2πi k/q}, exact at quarter turns.
fn root_of_unity(k: u64, q: u64) -> Complex64 {
    let k = k % q;
    if (4 * k).is_multiple_of(q) {
        return match 4 * k / q {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, TAU * k as f64 / q as f64)
}

impl RotationAngle {
    pub fn rational(p: i64, q: i64) -> Result<Self> {
        if q <= 0 {
            return Err(Error::InvalidAngle(format!("denominator {q} must be positive")));
        }
        let q = q as u64;
        let p = p.rem_euclid(q as i64) as u64;
        let g = gcd(p, q);
        Ok(RotationAngle::Rational { p: p / g, q: q / g })
    }

    pub fn irrational(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::InvalidAngle(format!("turn fraction {x} is not finite")));
        }
        Ok(RotationAngle::Irrational {
            x: x.rem_euclid(1.0),
            diophantine: None,
        })
    }

    pub fn with_diophantine(self, tau: f64, gamma: f64) -> Result<Self> {
        if !(tau > 2.0) || !(gamma > 0.0) {
            return Err(Error::InvalidAngle(format!(
                "Diophantine data requires tau > 2 and gamma > 0, got ({tau}, {gamma})"
            )));
        }
        match self {
            RotationAngle::Irrational { x, .. } => Ok(RotationAngle::Irrational {
                x,
                diophantine: Some(Diophantine { tau, gamma }),
            }),
            RotationAngle::Rational { .. } => Err(Error::InvalidAngle(
                "Diophantine data only applies to irrational angles".into(),
            )),
        }
    }

    /// The rotation angle of a unimodular complex number. Angles within
    /// `1e-10` turns of a fraction with denominator at most 1000 are
    /// returned as exact rationals.
    pub fn from_unimodular(beta: Complex64, tol: f64) -> Result<Self> {
        if (beta.norm() - 1.0).abs() > tol {
            return Err(Error::NotUnimodular(beta));
        }
        let x = (beta.arg() / TAU).rem_euclid(1.0);
        match best_rational(x, 1000, 1e-10) {
            Some((p, q)) => Self::rational(p as i64, q as i64),
            None => Self::irrational(x),
        }
    }

    /// Fraction of a full turn.
    pub fn turns(&self) -> f64 {
        match *self {
            RotationAngle::Rational { p, q } => p as f64 / q as f64,
            RotationAngle::Irrational { x, .. } => x,
        }
    }

    pub fn value(&self) -> Complex64 {
        self.power(1)
    }

    /// βⁿ, computed from the reduced turn fraction.
    pub fn power(&self, n: u64) -> Complex64 {
        match *self {
            RotationAngle::Rational { p, q } => {
                let k = ((p as u128 * n as u128) % q as u128) as u64;
                root_of_unity(k, q)
            }
            RotationAngle::Irrational { x, .. } => {
                let t = (x * n as f64).rem_euclid(1.0);
                Complex64::from_polar(1.0, TAU * t)
            }
        }
    }

    /// The least N ≥ 1 with βᴺ = 1, if any.
    pub fn period(&self) -> Option<u64> {
        match *self {
            RotationAngle::Rational { q, .. } => Some(q),
            RotationAngle::Irrational { .. } => None,
        }
    }

    pub fn is_periodic(&self) -> bool {
        self.period().is_some()
    }

    pub fn diophantine(&self) -> Option<Diophantine> {
        match *self {
            RotationAngle::Irrational { diophantine, .. } => diophantine,
            RotationAngle::Rational { .. } => None,
        }
    }
}

/// Continued-fraction search for p/q with q ≤ `max_den` and |x − p/q| < tol.
fn best_rational(x: f64, max_den: u64, tol: f64) -> Option<(u64, u64)> {
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            return None;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() < tol {
            return Some((h1.rem_euclid(k1) as u64, k1 as u64));
        }
        let frac = rest - a;
        if frac < 1e-15 {
            return None;
        }
        rest = 1.0 / frac;
    }
    None
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum AngleRepr {
    Rational {
        rational: (i64, i64),
    },
    Irrational {
        irrational: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        diophantine: Option<Diophantine>,
    },
}

impl TryFrom<AngleRepr> for RotationAngle {
    type Error = Error;

    fn try_from(repr: AngleRepr) -> Result<Self> {
        match repr {
            AngleRepr::Rational { rational: (p, q) } => RotationAngle::rational(p, q),
            AngleRepr::Irrational {
                irrational,
                diophantine,
            } => {
                let angle = RotationAngle::irrational(irrational)?;
                match diophantine {
                    Some(d) => angle.with_diophantine(d.tau, d.gamma),
                    None => Ok(angle),
                }
            }
        }
    }
}

impl From<RotationAngle> for AngleRepr {
    fn from(angle: RotationAngle) -> Self {
        match angle {
            RotationAngle::Rational { p, q } => AngleRepr::Rational {
                rational: (p as i64, q as i64),
            },
            RotationAngle::Irrational { x, diophantine } => AngleRepr::Irrational {
                irrational: x,
                diophantine,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_is_reduced() {
        assert_eq!(
            RotationAngle::rational(2, 4).unwrap(),
            RotationAngle::Rational { p: 1, q: 2 }
        );
        assert_eq!(
            RotationAngle::rational(-1, 4).unwrap(),
            RotationAngle::Rational { p: 3, q: 4 }
        );
        assert!(RotationAngle::rational(1, 0).is_err());
    }

    #[test]
    fn period_is_exact() {
        let beta = RotationAngle::rational(3, 8).unwrap();
        assert_eq!(beta.period(), Some(8));
        assert_eq!(beta.power(8), Complex64::new(1.0, 0.0));
        for k in 1..8 {
            assert!((beta.power(k) - 1.0).norm() > 0.1);
        }
    }

    #[test]
    fn quarter_turns_are_exact() {
        let i = RotationAngle::rational(1, 4).unwrap();
        assert_eq!(i.value(), Complex64::new(0.0, 1.0));
        assert_eq!(i.power(2), Complex64::new(-1.0, 0.0));
        assert_eq!(i.power(3), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn recovers_rational_from_value() {
        let beta = Complex64::from_polar(1.0, TAU / 3.0);
        assert_eq!(
            RotationAngle::from_unimodular(beta, 1e-9).unwrap(),
            RotationAngle::Rational { p: 1, q: 3 }
        );
        assert_eq!(
            RotationAngle::from_unimodular(Complex64::new(-1.0, 0.0), 1e-9).unwrap(),
            RotationAngle::Rational { p: 1, q: 2 }
        );
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        let angle =
            RotationAngle::from_unimodular(Complex64::from_polar(1.0, TAU * golden), 1e-9).unwrap();
        assert!(!angle.is_periodic());
        assert!((angle.turns() - golden).abs() < 1e-14);
    }

    #[test]
    fn json_shapes() {
        let r: RotationAngle = serde_json::from_str(r#"{"rational": [1, 2]}"#).unwrap();
        assert_eq!(r, RotationAngle::Rational { p: 1, q: 2 });
        let d: RotationAngle =
            serde_json::from_str(r#"{"irrational": 0.25, "diophantine": {"tau": 2.5, "gamma": 0.1}}"#)
                .unwrap();
        assert_eq!(d.diophantine(), Some(Diophantine { tau: 2.5, gamma: 0.1 }));
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"rational":[1,2]}"#
        );
        assert!(serde_json::from_str::<RotationAngle>(
            r#"{"irrational": 0.3, "diophantine": {"tau": 1.5, "gamma": 0.1}}"#
        )
        .is_err());
    }
}
