//! Fréchet metrics on Hol(𝔻), seminorm isometry tests, and the structure
//! of isometries for one or two seminorms.
//!
//! Operators are described by their basis images Te_0, …, Te_K, so Tf is
//! formed by linearity for polynomials f of degree ≤ K.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::angle::RotationAngle;
use crate::blaschke::{detect_boundary_set, BlaschkeProduct, BoundaryVerdict};
use crate::error::{Error, Result};
use crate::series::{CircleSup, TaylorSeries};
use crate::tolerance::{PIVOT_TOL, STRUCTURE_TOL, SUP_SLACK, ZERO_COEFF};

/// Samples per circle for every seminorm evaluation in this module.
pub const SUP_SAMPLES: usize = 2048;

/// Default number of basis images handed to the classifiers.
pub const DEFAULT_BASIS: usize = 16;

/// Radii r_1 < r_2 < … of the seminorms ‖f‖_{∞,r_k}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeminormFamily {
    radii: Vec<f64>,
}

impl SeminormFamily {
    pub fn new(radii: Vec<f64>) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::InvalidRadii("the family is empty".into()));
        }
        if let Some(r) = radii.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
            return Err(Error::InvalidRadii(format!("{r} is not in (0, 1)")));
        }
        if let Some(w) = radii.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidRadii(format!(
                "not strictly increasing at {} >= {}",
                w[0], w[1]
            )));
        }
        Ok(SeminormFamily { radii })
    }

    /// The k-th term (k = 1, 2, …) uses r = 1 − 1/(k + 1).
    pub fn standard(terms: usize) -> Self {
        SeminormFamily {
            radii: (1..=terms).map(|k| 1.0 - 1.0 / (k as f64 + 1.0)).collect(),
        }
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }
}

/// The two metrics generated by a seminorm family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricVariant {
    /// Σ 2^{−k} min(1, ‖f − g‖_k).
    Min1,
    /// Σ 2^{−k} ‖f − g‖_k / (1 + ‖f − g‖_k).
    Ratio,
}

impl MetricVariant {
    fn summand(self, seminorm: f64) -> f64 {
        match self {
            MetricVariant::Min1 => seminorm.min(1.0),
            MetricVariant::Ratio => seminorm / (1.0 + seminorm),
        }
    }
}

/// A truncated metric value. The full series lies within `tail_bound` above
/// `value`, and `error_bound` covers sampling error in the partial sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricValue {
    pub value: f64,
    pub tail_bound: f64,
    pub error_bound: f64,
}

/// Partial sum of the metric over the first `terms` radii of `family`.
pub fn metric_d(
    f: &TaylorSeries,
    g: &TaylorSeries,
    family: &SeminormFamily,
    terms: usize,
    variant: MetricVariant,
) -> Result<MetricValue> {
    if terms < 8 {
        return Err(Error::InvalidInput(format!("at least 8 terms are required, got {terms}")));
    }
    if family.len() < terms {
        return Err(Error::InvalidRadii(format!(
            "{terms} terms requested from a family of {} radii",
            family.len()
        )));
    }
    let limit = f.radius().min(g.radius());
    let radii = &family.radii()[..terms];
    if let Some(&r) = radii.iter().find(|&&r| r > limit) {
        return Err(Error::OutsideRadius {
            z: Complex64::new(r, 0.0),
            radius: limit,
        });
    }
    let h = f - g;
    let mut value = 0.0;
    let mut error_bound = 0.0;
    let mut weight = 1.0;
    for &r in radii {
        weight *= 0.5;
        let sup = h.sup_on_circle(r, SUP_SAMPLES)?;
        value += weight * variant.summand(sup.value);
        // Both summands are 1-Lipschitz in the seminorm.
        error_bound += weight * sup.error_bound;
    }
    Ok(MetricValue {
        value,
        tail_bound: weight,
        error_bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    ConfirmedIsometry,
    Violation,
}

/// Structure recovered from the basis images of an isometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Classification {
    /// Tf(z) = α f(βz).
    TwoSeminorm { alpha: Complex64, beta: RotationAngle },
    /// Tf(z) = B₁(z/r) f(βz); a constant B₁ has degree 0.
    OneSeminorm {
        b1: BlaschkeProduct,
        beta: RotationAngle,
        r: f64,
    },
}

/// A polynomial whose seminorm is not preserved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationWitness {
    pub f: TaylorSeries,
    pub r: f64,
    /// ‖Tf‖_{∞,r}.
    pub lhs: f64,
    /// ‖f‖_{∞,r}.
    pub rhs: f64,
    pub error_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsometryVerdict {
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<Classification>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation_witness: Option<ViolationWitness>,
    /// Index n of the first basis image breaking the expected structure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failing_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl IsometryVerdict {
    fn confirmed(classification: Option<Classification>) -> Self {
        IsometryVerdict {
            verdict: Verdict::ConfirmedIsometry,
            classification,
            violation_witness: None,
            failing_index: None,
            detail: None,
        }
    }

    fn witnessed(witness: ViolationWitness) -> Self {
        IsometryVerdict {
            verdict: Verdict::Violation,
            classification: None,
            violation_witness: Some(witness),
            failing_index: None,
            detail: None,
        }
    }

    fn structural(index: usize, detail: impl Into<String>) -> Self {
        IsometryVerdict {
            verdict: Verdict::Violation,
            classification: None,
            violation_witness: None,
            failing_index: Some(index),
            detail: Some(detail.into()),
        }
    }

    pub fn is_isometry(&self) -> bool {
        self.verdict == Verdict::ConfirmedIsometry
    }
}

fn sup(f: &TaylorSeries, r: f64) -> Result<CircleSup> {
    f.sup_on_circle(r, SUP_SAMPLES)
}

/// Compares ‖Tf‖_{∞,r} with ‖f‖_{∞,r} on `trials` random polynomials of
/// degree ≤ K with coefficients in the unit box. A confirmation is evidence,
/// not proof.
pub fn test_isometry(
    images: &[TaylorSeries],
    r: f64,
    trials: usize,
    seed: u64,
) -> Result<IsometryVerdict> {
    if images.len() < 5 {
        return Err(Error::TooFewImages {
            min: 5,
            got: images.len(),
        });
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidRadius(r));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let coeffs: Vec<Complex64> = (0..images.len())
            .map(|_| Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)))
            .collect();
        let f = TaylorSeries::polynomial(coeffs.clone());
        let terms: Vec<(Complex64, &TaylorSeries)> = coeffs.iter().copied().zip(images).collect();
        let tf = TaylorSeries::linear_combination(&terms);
        let (lhs, rhs) = (sup(&tf, r)?, sup(&f, r)?);
        let error_bound = lhs.error_bound + rhs.error_bound + SUP_SLACK;
        if (lhs.value - rhs.value).abs() > error_bound {
            return Ok(IsometryVerdict::witnessed(ViolationWitness {
                f,
                r,
                lhs: lhs.value,
                rhs: rhs.value,
                error_bound,
            }));
        }
    }
    Ok(IsometryVerdict::confirmed(None))
}

/// Largest coefficient deviation of images[n] from `expected`, over the
/// degrees either series carries.
fn deviation(image: &TaylorSeries, expected: &TaylorSeries) -> f64 {
    image.max_coeff_diff(expected, image.degree().max(expected.degree()))
}

type Structure = std::result::Result<Classification, (usize, String)>;

/// Runs the seminorm pre-tests, then the structural analysis. A pre-test
/// violation is reported with its witness, annotated with the first failing
/// basis image when the structure check finds one.
fn combine(pretests: Vec<IsometryVerdict>, structure: Structure) -> IsometryVerdict {
    let failed = pretests.into_iter().find(|v| !v.is_isometry());
    match (failed, structure) {
        (None, Ok(classification)) => IsometryVerdict::confirmed(Some(classification)),
        (None, Err((index, detail))) => IsometryVerdict::structural(index, detail),
        (Some(verdict), Ok(_)) => verdict,
        (Some(mut verdict), Err((index, detail))) => {
            verdict.failing_index = Some(index);
            verdict.detail = Some(detail);
            verdict
        }
    }
}

/// Classifies an operator isometric for the seminorms at `r1` < `r2` as
/// Tf(z) = α f(βz), or reports the first basis image that breaks the form.
pub fn classify_two_seminorm(
    images: &[TaylorSeries],
    r1: f64,
    r2: f64,
    trials: usize,
    seed: u64,
) -> Result<IsometryVerdict> {
    if !(0.0 < r1 && r1 < r2 && r2 < 1.0) {
        return Err(Error::InvalidRadii(format!("need 0 < r1 < r2 < 1, got {r1}, {r2}")));
    }
    let pretests = vec![
        test_isometry(images, r1, trials, seed)?,
        test_isometry(images, r2, trials, seed)?,
    ];
    Ok(combine(pretests, two_seminorm_structure(images)?))
}

fn two_seminorm_structure(images: &[TaylorSeries]) -> Result<Structure> {
    let alpha = images[0].coeff(0);
    if deviation(&images[0], &TaylorSeries::constant(alpha)) > STRUCTURE_TOL {
        return Ok(Err((0, "Te_0 is not constant".into())));
    }
    if (alpha.norm() - 1.0).abs() > STRUCTURE_TOL {
        return Ok(Err((0, format!("|Te_0| = {} is not 1", alpha.norm()))));
    }
    let beta = images[1].coeff(1) / alpha;
    let expected = |n: usize| TaylorSeries::monomial(n).scale(alpha * beta.powu(n as u32));
    if deviation(&images[1], &expected(1)) > STRUCTURE_TOL {
        return Ok(Err((1, "Te_1 is not a multiple of z".into())));
    }
    if (beta.norm() - 1.0).abs() > STRUCTURE_TOL {
        return Ok(Err((1, format!("|β| = {} is not 1", beta.norm()))));
    }
    for (n, image) in images.iter().enumerate().skip(2) {
        if deviation(image, &expected(n)) > STRUCTURE_TOL {
            return Ok(Err((n, format!("Te_{n} differs from αβ^{n} z^{n}"))));
        }
    }
    Ok(Ok(Classification::TwoSeminorm {
        alpha,
        beta: RotationAngle::from_unimodular(beta, STRUCTURE_TOL)?,
    }))
}

/// Classifies an operator isometric for the single seminorm at `r` as
/// Tf(z) = B₁(z/r) f(βz) with B₁ a unimodular constant or a finite Blaschke
/// product.
pub fn classify_one_seminorm(
    images: &[TaylorSeries],
    r: f64,
    trials: usize,
    seed: u64,
) -> Result<IsometryVerdict> {
    let pretest = test_isometry(images, r, trials, seed)?;
    Ok(combine(vec![pretest], one_seminorm_structure(images, r)?))
}

fn one_seminorm_structure(images: &[TaylorSeries], r: f64) -> Result<Structure> {
    let w = &images[0];
    if w.is_zero() {
        return Ok(Err((0, "Te_0 vanishes".into())));
    }
    let degree = images.iter().map(TaylorSeries::degree).max().unwrap_or(0);
    let negligible = ZERO_COEFF.max(PIVOT_TOL * w.majorant(r));
    let order = w.order_at_origin(negligible).unwrap_or(0);
    let shared = images[1].coeffs().iter().take(order).all(|c| c.norm() <= negligible);
    if !shared {
        return Err(Error::StructureMismatch(format!(
            "Te_1 does not share the zero of order {order} of Te_0 at the origin"
        )));
    }
    // Only the leading quotient coefficients are formed by division: the
    // recurrence amplifies rounding by the inverse of the zeros of Te_0, so
    // Te_1 = βz·Te_0 is then checked by multiplication.
    let q = images[1].shift_down(order).divide(&w.shift_down(order), 1)?;
    let beta = q.coeff(1);
    if q.coeff(0).norm() > STRUCTURE_TOL
        || deviation(&images[1], &w.shift_up(1).scale(beta).truncate(degree)) > STRUCTURE_TOL
    {
        return Ok(Err((1, "Te_1/Te_0 is not a multiple of z".into())));
    }
    if (beta.norm() - 1.0).abs() > STRUCTURE_TOL {
        return Ok(Err((1, format!("|β| = {} is not 1", beta.norm()))));
    }

    let b1 = match certify_inner(w, r) {
        Ok(b1) => b1,
        Err(detail) => return Ok(Err((0, detail))),
    };

    for (n, image) in images.iter().enumerate().skip(2) {
        let expected = w.shift_up(n).scale(beta.powu(n as u32)).truncate(degree);
        if deviation(image, &expected) > STRUCTURE_TOL {
            return Ok(Err((n, format!("Te_{n} differs from Te_0·β^{n} z^{n}"))));
        }
    }
    Ok(Ok(Classification::OneSeminorm {
        b1,
        beta: RotationAngle::from_unimodular(beta, STRUCTURE_TOL)?,
        r,
    }))
}

/// B₁ with w(z) = B₁(z/r), i.e. B₁ = w(r·), when that is a unimodular
/// constant or a certified finite Blaschke product.
fn certify_inner(w: &TaylorSeries, r: f64) -> std::result::Result<BlaschkeProduct, String> {
    let g = w.rescale_argument(r).map_err(|e| e.to_string())?;
    let c0 = g.coeff(0);
    if deviation(&g, &TaylorSeries::constant(c0)) <= STRUCTURE_TOL {
        if (c0.norm() - 1.0).abs() > STRUCTURE_TOL {
            return Err(format!("constant Te_0 has modulus {} != 1", c0.norm()));
        }
        return BlaschkeProduct::new(c0.arg(), 0, Vec::new()).map_err(|e| e.to_string());
    }
    let report = detect_boundary_set(&g).map_err(|e| format!("Te_0(r·) is not inner: {e}"))?;
    match (report.verdict, report.certified_blaschke) {
        (BoundaryVerdict::AllOfCircle, Some(b)) => Ok(b),
        _ => Err("Te_0(r·) is not unimodular on the unit circle".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wco::{WCOp, Weight, Symbol};
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn images(op: &WCOp, k: usize) -> Vec<TaylorSeries> {
        (0..=k)
            .map(|n| op.apply(&TaylorSeries::monomial(n)).unwrap())
            .collect()
    }

    fn weighted_shift(r: f64, beta: RotationAngle) -> WCOp {
        WCOp::new(
            Weight::blaschke(BlaschkeProduct::monomial(0.0, 1), r).unwrap(),
            Symbol::Rotation(beta),
        )
        .unwrap()
    }

    #[test]
    fn metric_examples() {
        let family = SeminormFamily::standard(20);
        let one = TaylorSeries::constant(c(1.0, 0.0));
        let zero = TaylorSeries::zero();
        let d = metric_d(&one, &one, &family, 20, MetricVariant::Min1).unwrap();
        assert_eq!(d.value, 0.0);
        let d = metric_d(&one, &zero, &family, 20, MetricVariant::Min1).unwrap();
        assert_abs_diff_eq!(d.value, 1.0 - 2f64.powi(-20), epsilon = 1e-15);
        assert_eq!(d.tail_bound, 2f64.powi(-20));
        let d = metric_d(&one, &zero, &family, 20, MetricVariant::Ratio).unwrap();
        assert_abs_diff_eq!(d.value, 0.4999995, epsilon = 1e-7);
    }

    #[test]
    fn metric_preconditions() {
        let family = SeminormFamily::standard(20);
        let f = TaylorSeries::monomial(1).with_radius(0.8).unwrap();
        assert!(matches!(
            metric_d(&f, &f, &family, 20, MetricVariant::Min1),
            Err(Error::OutsideRadius { .. })
        ));
        assert!(metric_d(&f, &f, &family, 4, MetricVariant::Min1).is_err());
        assert!(SeminormFamily::new(vec![0.5, 0.4]).is_err());
        assert!(SeminormFamily::new(vec![0.5, 1.0]).is_err());
    }

    #[test]
    fn identity_and_doubling() {
        let basis: Vec<_> = (0..=8).map(TaylorSeries::monomial).collect();
        assert!(test_isometry(&basis, 0.5, 20, 1).unwrap().is_isometry());

        let doubled: Vec<_> = basis.iter().map(|e| e.scale(c(2.0, 0.0))).collect();
        let verdict = test_isometry(&doubled, 0.5, 20, 1).unwrap();
        let witness = verdict.violation_witness.unwrap();
        assert_abs_diff_eq!(witness.lhs, 2.0 * witness.rhs, epsilon = 1e-9);
    }

    #[test]
    fn weighted_shift_is_isometric_only_at_its_radius() {
        let op = weighted_shift(0.5, RotationAngle::rational(1, 3).unwrap());
        let basis = images(&op, 8);
        assert!(test_isometry(&basis, 0.5, 20, 7).unwrap().is_isometry());
        let verdict = test_isometry(&basis, 0.25, 20, 7).unwrap();
        assert_eq!(verdict.verdict, Verdict::Violation);
        assert!(verdict.violation_witness.is_some());
    }

    #[test]
    fn two_seminorm_recovers_parameters() {
        let beta = RotationAngle::rational(1, 3).unwrap();
        let op = WCOp::isometry(c(0.0, 1.0), beta.clone());
        let verdict = classify_two_seminorm(&images(&op, 16), 0.3, 0.7, 16, 3).unwrap();
        match verdict.classification.unwrap() {
            Classification::TwoSeminorm { alpha, beta: b } => {
                assert!((alpha - c(0.0, 1.0)).norm() < 1e-12);
                assert_eq!(b, beta);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tampered_image_is_reported() {
        let beta = RotationAngle::rational(1, 5).unwrap();
        let op = WCOp::isometry(c(1.0, 0.0), beta.clone());
        let mut basis = images(&op, 16);
        basis[2] = TaylorSeries::monomial(2).scale(beta.power(3));
        let verdict = classify_two_seminorm(&basis, 0.3, 0.7, 16, 3).unwrap();
        assert_eq!(verdict.verdict, Verdict::Violation);
        assert_eq!(verdict.failing_index, Some(2));
    }

    #[test]
    fn one_seminorm_monomial_weight() {
        let op = weighted_shift(0.5, RotationAngle::rational(1, 2).unwrap());
        let verdict = classify_one_seminorm(&images(&op, 16), 0.5, 16, 11).unwrap();
        match verdict.classification.unwrap() {
            Classification::OneSeminorm { b1, beta, r } => {
                assert_eq!(b1.origin_order(), 1);
                assert!(b1.zeros().is_empty());
                assert_eq!(beta, RotationAngle::rational(1, 2).unwrap());
                assert_eq!(r, 0.5);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn one_seminorm_constant_weight() {
        let op = WCOp::isometry(c(0.6, -0.8), RotationAngle::irrational(0.1234).unwrap());
        let verdict = classify_one_seminorm(&images(&op, 16), 0.6, 16, 5).unwrap();
        match verdict.classification.unwrap() {
            Classification::OneSeminorm { b1, .. } => {
                assert_eq!(b1.degree(), 0);
                assert!((b1.eval(c(0.0, 0.0)).unwrap() - c(0.6, -0.8)).norm() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn one_seminorm_recovers_blaschke_zero() {
        let r = 0.5;
        let zero = c(0.3 * r, 0.1);
        let b = BlaschkeProduct::new(0.4, 1, vec![zero]).unwrap();
        let op = WCOp::new(
            Weight::blaschke(b.clone(), r).unwrap(),
            Symbol::Rotation(RotationAngle::rational(2, 7).unwrap()),
        )
        .unwrap();
        let verdict = classify_one_seminorm(&images(&op, 16), r, 16, 5).unwrap();
        match verdict.classification.unwrap() {
            Classification::OneSeminorm { b1, .. } => {
                assert_eq!(b1.origin_order(), 1);
                assert_eq!(b1.zeros().len(), 1);
                assert!((b1.zeros()[0] - zero).norm() < 1e-7);
                assert_abs_diff_eq!(b1.theta(), 0.4, epsilon = 1e-7);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn verdict_json_shape() {
        let verdict = IsometryVerdict::confirmed(Some(Classification::TwoSeminorm {
            alpha: c(0.0, 1.0),
            beta: RotationAngle::rational(1, 2).unwrap(),
        }));
        let json = serde_json::to_string(&verdict).unwrap();
        assert_eq!(
            json,
            r#"{"verdict":"ConfirmedIsometry","classification":{"TwoSeminorm":{"alpha":[0.0,1.0],"beta":{"rational":[1,2]}}}}"#
        );
        assert_eq!(serde_json::from_str::<IsometryVerdict>(&json).unwrap(), verdict);
    }
}
