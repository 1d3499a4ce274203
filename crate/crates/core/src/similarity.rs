//! Similarity of weighted composition operators to isometries T_{λ,β}, with
//! explicit intertwiners.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angle::RotationAngle;
use crate::blaschke::winding_on_circle;
use crate::error::{Error, Result};
use crate::series::TaylorSeries;
use crate::tolerance::{SIMILARITY_TOL, SMALL_DENOMINATOR, STRUCTURE_TOL};
use crate::wco::{MobiusInvolution, OperatorSpec, Symbol, SymbolSpec, WCOp};

/// Monomials e_0 … e_8 on which intertwining identities are checked.
pub const VERIFY_BASIS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    Similar,
    NotSimilar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reason {
    NonElliptic,
    WeightModulusAtFixedPointNotOne,
    PeriodicProductNotUnimodularConstant,
    EmptyUnimodularPointSpectrum,
    #[serde(rename = "OK")]
    Ok,
}

/// The isometry T_{λ,β} f = λ f(βz).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Target {
    pub lambda: Complex64,
    pub beta: RotationAngle,
}

impl Target {
    fn apply(&self, f: &TaylorSeries) -> TaylorSeries {
        f.compose_rotation(&self.beta).scale(self.lambda)
    }
}

/// An invertible operator U on Hol(𝔻).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntertwinerKind {
    /// U g = f·g.
    MultiplicationBy(TaylorSeries),
    /// U g = g/w.
    DivisionBy(TaylorSeries),
    /// U g = g∘ψ.
    CompositionConjugation(MobiusInvolution),
    /// U = U_1 ∘ U_2 ∘ … ∘ U_k.
    Composite(Vec<IntertwinerKind>),
}

impl IntertwinerKind {
    fn forward(&self, g: &TaylorSeries, degree: usize) -> Result<TaylorSeries> {
        match self {
            IntertwinerKind::MultiplicationBy(f) => Ok(f.mul_truncated(g, degree)),
            IntertwinerKind::DivisionBy(w) => g.divide(w, degree),
            IntertwinerKind::CompositionConjugation(psi) => psi.compose(g, degree),
            IntertwinerKind::Composite(parts) => parts
                .iter()
                .rev()
                .try_fold(g.clone(), |acc, part| part.forward(&acc, degree)),
        }
    }

    fn inverse(&self, g: &TaylorSeries, degree: usize) -> Result<TaylorSeries> {
        match self {
            IntertwinerKind::MultiplicationBy(f) => g.divide(f, degree),
            IntertwinerKind::DivisionBy(w) => Ok(w.mul_truncated(g, degree)),
            IntertwinerKind::CompositionConjugation(psi) => psi.compose(g, degree),
            IntertwinerKind::Composite(parts) => parts
                .iter()
                .try_fold(g.clone(), |acc, part| part.inverse(&acc, degree)),
        }
    }
}

/// U with U⁻¹ W U = T_{λ,β} for the operator it was built for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Intertwiner {
    pub kind: IntertwinerKind,
    pub target: Target,
}

impl Intertwiner {
    pub fn apply(&self, g: &TaylorSeries, degree: usize) -> Result<TaylorSeries> {
        self.kind.forward(g, degree)
    }

    pub fn apply_inverse(&self, g: &TaylorSeries, degree: usize) -> Result<TaylorSeries> {
        self.kind.inverse(g, degree)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityVerdict {
    pub decision: Decision,
    pub reason: Reason,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Intertwiner>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

impl SimilarityVerdict {
    fn rejected(reason: Reason) -> Self {
        SimilarityVerdict {
            decision: Decision::NotSimilar,
            reason,
            witness: None,
            residual: None,
        }
    }

    pub fn is_similar(&self) -> bool {
        self.decision == Decision::Similar
    }
}

/// Decides whether an operator given in wire form is similar to an
/// isometry. Non-elliptic symbols are rejected without construction.
pub fn decide_similarity_spec(spec: &OperatorSpec) -> Result<SimilarityVerdict> {
    match spec.symbol {
        SymbolSpec::Hyperbolic { .. } | SymbolSpec::Parabolic { .. } => {
            Ok(SimilarityVerdict::rejected(Reason::NonElliptic))
        }
        _ => decide_similarity(&WCOp::try_from(spec.clone())?),
    }
}

/// Decides whether W is similar to some T_{λ,β} and, if so, builds and
/// verifies an intertwiner.
pub fn decide_similarity(w: &WCOp) -> Result<SimilarityVerdict> {
    let (rotated, psi) = match w.symbol() {
        Symbol::Rotation(_) => (w.clone(), None),
        Symbol::Elliptic { .. } => {
            let (rotated, psi) = w.conjugate_to_origin()?;
            (rotated, Some(psi))
        }
    };
    let Symbol::Rotation(beta) = rotated.symbol().clone() else {
        return Err(Error::NotRotationSymbol);
    };
    let m = rotated.weight_series()?;
    let m0 = m.coeff(0);
    if (m0.norm() - 1.0).abs() > STRUCTURE_TOL {
        return Ok(SimilarityVerdict::rejected(Reason::WeightModulusAtFixedPointNotOne));
    }

    let inner = if beta.is_periodic() {
        let product = rotated.weight_product()?;
        let c = product.coeff(0);
        let constant = product.max_coeff_diff(&TaylorSeries::constant(c), product.degree());
        if constant > STRUCTURE_TOL || (c.norm() - 1.0).abs() > STRUCTURE_TOL {
            return Ok(SimilarityVerdict::rejected(
                Reason::PeriodicProductNotUnimodularConstant,
            ));
        }
        build_intertwiner_periodic(&m, &beta, rotated.degree())?
    } else {
        let working = m.radius().min(1.0);
        match winding_on_circle(&m, working) {
            Ok(0) => {}
            Ok(_) | Err(Error::ZeroOnBoundary(_)) => {
                return Ok(SimilarityVerdict::rejected(Reason::EmptyUnimodularPointSpectrum))
            }
            Err(e) => return Err(e),
        }
        build_intertwiner_aperiodic(&rotated, m0)?
    };

    let witness = match psi {
        None => inner,
        Some(psi) => {
            let conjugation = IntertwinerKind::CompositionConjugation(psi);
            let kind = if is_identity(&inner.kind) {
                conjugation
            } else {
                IntertwinerKind::Composite(vec![conjugation, inner.kind])
            };
            Intertwiner {
                kind,
                target: inner.target,
            }
        }
    };
    let residual = verify_similarity(&witness, w)?;
    if residual > SIMILARITY_TOL {
        return Err(Error::VerificationFailed {
            residual,
            tolerance: SIMILARITY_TOL,
        });
    }
    Ok(SimilarityVerdict {
        decision: Decision::Similar,
        reason: Reason::Ok,
        witness: Some(witness),
        residual: Some(residual),
    })
}

fn is_identity(kind: &IntertwinerKind) -> bool {
    let one = TaylorSeries::constant(Complex64::new(1.0, 0.0));
    match kind {
        IntertwinerKind::MultiplicationBy(f) | IntertwinerKind::DivisionBy(f) => {
            f.max_coeff_diff(&one, f.degree()) == 0.0
        }
        _ => false,
    }
}

/// Logarithm w̃ of the periodic intertwiner and the phase θ with
/// w̃(z) − w̃(βz) + m̃(z) = iθ, where m = exp(m̃).
pub fn periodic_log_solution(
    m: &TaylorSeries,
    beta: &RotationAngle,
    degree: usize,
) -> Result<(TaylorSeries, f64)> {
    let period = beta.period().ok_or(Error::NotPeriodic)? as usize;
    let m0 = m.coeff(0);
    if m0 == Complex64::new(0.0, 0.0) {
        return Err(Error::VanishingConstantTerm);
    }
    if (m0.norm() - 1.0).abs() > STRUCTURE_TOL {
        return Err(Error::NotUnimodular(m0));
    }
    let log = m.log_series(degree)?;
    let mut b = vec![Complex64::new(0.0, 0.0); degree + 1];
    for n in 1..=degree {
        let a = log.coeff(n);
        let k = n % period;
        if k == 0 {
            if a.norm() > STRUCTURE_TOL {
                return Err(Error::ProductNotConstant {
                    index: n,
                    modulus: a.norm(),
                });
            }
        } else {
            b[n] = a / (beta.power(k as u64) - 1.0);
        }
    }
    let w_log = TaylorSeries::new(b, m.radius())?;
    Ok((w_log, m0.arg()))
}

/// Intertwiner for a rotation of exact period N whose weight product m_N is
/// a unimodular constant: U = M_{1/w} with w = exp(w̃), reaching T_{e^{iθ},β}.
pub fn build_intertwiner_periodic(
    m: &TaylorSeries,
    beta: &RotationAngle,
    degree: usize,
) -> Result<Intertwiner> {
    let (w_log, theta) = periodic_log_solution(m, beta, degree)?;
    Ok(Intertwiner {
        kind: IntertwinerKind::DivisionBy(w_log.exp_series(degree)),
        target: Target {
            lambda: Complex64::from_polar(1.0, theta),
            beta: beta.clone(),
        },
    })
}

/// Intertwiner U = M_f for a rotation symbol, with f the eigenfunction
/// m·(f∘φ) = λf normalized by f(0) = 1, reaching T_{λ,β}.
pub fn build_intertwiner_aperiodic(w: &WCOp, lambda: Complex64) -> Result<Intertwiner> {
    let Symbol::Rotation(beta) = w.symbol() else {
        return Err(Error::NotRotationSymbol);
    };
    if (lambda.norm() - 1.0).abs() > STRUCTURE_TOL {
        return Err(Error::NotUnimodular(lambda));
    }
    let m = w.weight_series()?;
    let m0 = m.coeff(0);
    if (lambda - m0).norm() > STRUCTURE_TOL {
        return Err(Error::ResonanceUnmet { lambda, m0 });
    }
    let degree = w.degree();
    let mut f = vec![Complex64::new(0.0, 0.0); degree + 1];
    f[0] = Complex64::new(1.0, 0.0);
    for n in 1..=degree {
        let denominator = lambda - m0 * beta.power(n as u64);
        if denominator.norm() < SMALL_DENOMINATOR {
            return Err(Error::SmallDenominator {
                index: n,
                value: denominator.norm(),
            });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..=n.min(m.degree()) {
            acc += m.coeff(j) * beta.power((n - j) as u64) * f[n - j];
        }
        f[n] = acc / denominator;
    }
    let f = TaylorSeries::new(f, m.radius())?;
    let working = f.radius().min(1.0);
    match winding_on_circle(&f, working) {
        Ok(0) => {}
        Ok(_) | Err(Error::ZeroOnBoundary(_)) => return Err(Error::VanishingIntertwiner),
        Err(e) => return Err(e),
    }
    Ok(Intertwiner {
        kind: IntertwinerKind::MultiplicationBy(f),
        target: Target {
            lambda,
            beta: beta.clone(),
        },
    })
}

/// max over e_0 … e_8 of the largest coefficient of (U⁻¹WU − T_{λ,β})e_n.
pub fn verify_similarity(u: &Intertwiner, w: &WCOp) -> Result<f64> {
    let degree = w.degree();
    let mut residual: f64 = 0.0;
    for n in 0..=VERIFY_BASIS {
        let e = TaylorSeries::monomial(n);
        let conjugated = u.apply_inverse(&w.apply(&u.apply(&e, degree)?)?, degree)?;
        let expected = u.target.apply(&e);
        residual = residual.max(conjugated.max_coeff_diff(&expected, degree));
    }
    Ok(residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wco::Weight;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn exp_of(g: &TaylorSeries) -> TaylorSeries {
        g.exp_series(64)
    }

    #[test]
    fn composition_with_elliptic_symbol() {
        let op = WCOp::new(
            Weight::Series(TaylorSeries::constant(c(1.0, 0.0))),
            Symbol::Elliptic {
                fixed_point: c(0.3, 0.2),
                angle: RotationAngle::rational(1, 3).unwrap(),
            },
        )
        .unwrap();
        let verdict = decide_similarity(&op).unwrap();
        assert!(verdict.is_similar());
        let witness = verdict.witness.unwrap();
        assert!(matches!(witness.kind, IntertwinerKind::CompositionConjugation(_)));
        assert!((witness.target.lambda - c(1.0, 0.0)).norm() < 1e-12);
        assert!(verdict.residual.unwrap() < 1e-8);
    }

    #[test]
    fn shift_is_not_similar() {
        let op = WCOp::multiplication(TaylorSeries::monomial(1));
        let verdict = decide_similarity(&op).unwrap();
        assert_eq!(verdict.decision, Decision::NotSimilar);
        assert_eq!(verdict.reason, Reason::WeightModulusAtFixedPointNotOne);
    }

    #[test]
    fn exp_weight_with_reflection() {
        let m = exp_of(&TaylorSeries::monomial(1));
        let op = WCOp::rotation(m, RotationAngle::rational(1, 2).unwrap());
        let verdict = decide_similarity(&op).unwrap();
        assert!(verdict.is_similar());
        let IntertwinerKind::DivisionBy(w) = verdict.witness.unwrap().kind else {
            panic!("expected a division intertwiner");
        };
        let expected = exp_of(&TaylorSeries::monomial(1).scale(c(-0.5, 0.0)));
        assert!(w.max_coeff_diff(&expected, 64) < 1e-10);
    }

    #[test]
    fn periodic_constant_weight() {
        let theta = 0.7;
        let m = TaylorSeries::constant(Complex64::from_polar(1.0, theta));
        let beta = RotationAngle::rational(2, 5).unwrap();
        let u = build_intertwiner_periodic(&m, &beta, 64).unwrap();
        let IntertwinerKind::DivisionBy(w) = &u.kind else {
            panic!()
        };
        assert_eq!(w, &TaylorSeries::constant(c(1.0, 0.0)));
        assert!((u.target.lambda - Complex64::from_polar(1.0, theta)).norm() < 1e-15);
    }

    #[test]
    fn periodic_coefficient_formula() {
        let m = exp_of(&TaylorSeries::from_real(&[0.0, 1.0, 0.0, 1.0]));
        let beta = RotationAngle::rational(1, 4).unwrap();
        let (w_log, theta) = periodic_log_solution(&m, &beta, 64).unwrap();
        assert!(theta.abs() < 1e-15);
        let i = c(0.0, 1.0);
        assert!((w_log.coeff(1) - 1.0 / (i - 1.0)).norm() < 1e-12);
        assert!((w_log.coeff(3) - 1.0 / (-i - 1.0)).norm() < 1e-12);
        for n in [0, 2, 4, 5, 6, 7, 8] {
            assert!(w_log.coeff(n).norm() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn periodic_rejects_residue_zero_terms() {
        let m = exp_of(&TaylorSeries::from_real(&[0.0, 0.0, 0.5]));
        let beta = RotationAngle::rational(1, 2).unwrap();
        assert!(matches!(
            periodic_log_solution(&m, &beta, 64),
            Err(Error::ProductNotConstant { index: 2, .. })
        ));
        let op = WCOp::rotation(m, beta);
        assert_eq!(
            decide_similarity(&op).unwrap().reason,
            Reason::PeriodicProductNotUnimodularConstant
        );
    }

    #[test]
    fn aperiodic_constant_weight() {
        let lambda = Complex64::from_polar(1.0, 2.0);
        let op = WCOp::isometry(lambda, RotationAngle::irrational(0.381966).unwrap());
        let u = build_intertwiner_aperiodic(&op, lambda).unwrap();
        assert_eq!(u.kind, IntertwinerKind::MultiplicationBy(TaylorSeries::constant(c(1.0, 0.0))));
        assert_eq!(verify_similarity(&u, &op).unwrap(), 0.0);
    }

    #[test]
    fn aperiodic_round_trip() {
        let lambda = Complex64::from_polar(1.0, -0.4);
        let beta = RotationAngle::irrational(0.2360679).unwrap();
        let f = exp_of(&TaylorSeries::monomial(1));
        let one_minus_beta = c(1.0, 0.0) - beta.value();
        let m = exp_of(&TaylorSeries::monomial(1).scale(one_minus_beta)).scale(lambda);
        let op = WCOp::rotation(m, beta);
        let u = build_intertwiner_aperiodic(&op, lambda).unwrap();
        let IntertwinerKind::MultiplicationBy(found) = &u.kind else {
            panic!()
        };
        assert!(found.max_coeff_diff(&f, 64) < 1e-10);
        assert!(verify_similarity(&u, &op).unwrap() < 1e-9);
    }

    #[test]
    fn aperiodic_resonance() {
        let op = WCOp::isometry(c(1.0, 0.0), RotationAngle::irrational(0.3).unwrap());
        assert!(matches!(
            build_intertwiner_aperiodic(&op, c(0.0, 1.0)),
            Err(Error::ResonanceUnmet { .. })
        ));
    }

    #[test]
    fn aperiodic_small_denominator() {
        // β within 1e-12 turns of 1/2: λ − m(0)β² nearly vanishes.
        let op = WCOp::rotation(
            TaylorSeries::from_real(&[1.0, 0.5]),
            RotationAngle::irrational(0.5 + 1e-12).unwrap(),
        );
        assert!(matches!(
            build_intertwiner_aperiodic(&op, c(1.0, 0.0)),
            Err(Error::SmallDenominator { index: 2, .. })
        ));
    }

    #[test]
    fn wrong_target_is_detected() {
        let beta = RotationAngle::rational(1, 4).unwrap();
        let op = WCOp::isometry(c(1.0, 0.0), beta.clone());
        let mut u = Intertwiner {
            kind: IntertwinerKind::MultiplicationBy(TaylorSeries::constant(c(1.0, 0.0))),
            target: Target {
                lambda: c(1.0, 0.0),
                beta: beta.clone(),
            },
        };
        assert_eq!(verify_similarity(&u, &op).unwrap(), 0.0);
        let other = RotationAngle::rational(1, 3).unwrap();
        let gap = (beta.value() - other.value()).norm();
        u.target.beta = other;
        assert!(verify_similarity(&u, &op).unwrap() >= gap - 1e-15);
    }

    #[test]
    fn elliptic_periodic_composite() {
        // m = exp(0.3ψ) becomes exp(0.3z) after conjugation by ψ.
        let fixed_point = c(-0.2, 0.1);
        let psi = MobiusInvolution::new(fixed_point).unwrap();
        let m = psi
            .compose(&exp_of(&TaylorSeries::from_real(&[0.0, 0.3])), 64)
            .unwrap();
        let op = WCOp::new(
            Weight::Series(m),
            Symbol::Elliptic {
                fixed_point,
                angle: RotationAngle::rational(1, 2).unwrap(),
            },
        )
        .unwrap();
        let verdict = decide_similarity(&op).unwrap();
        assert!(verdict.is_similar(), "{verdict:?}");
        assert!(matches!(
            verdict.witness.unwrap().kind,
            IntertwinerKind::Composite(_)
        ));
    }

    #[test]
    fn non_elliptic_spec_is_rejected() {
        let spec: OperatorSpec = serde_json::from_str(
            r#"{"weight":{"coeffs":[[1.0,0.0]]},"symbol":{"hyperbolic":{"fixed_points":[[1.0,0.0],[-1.0,0.0]]}}}"#,
        )
        .unwrap();
        let verdict = decide_similarity_spec(&spec).unwrap();
        assert_eq!(verdict.reason, Reason::NonElliptic);
        assert_eq!(verdict.decision, Decision::NotSimilar);
    }
}
