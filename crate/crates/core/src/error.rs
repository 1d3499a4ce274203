use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure is a violated hypothesis of the operation that raised it;
/// the message names the precondition.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid radius {0}: must be positive")]
    InvalidRadius(f64),

    #[error("point {z} lies outside the declared validity radius {radius}")]
    OutsideRadius { z: Complex64, radius: f64 },

    #[error("at least {min} samples are required, got {got}")]
    TooFewSamples { min: usize, got: usize },

    #[error("logarithm undefined: constant coefficient vanishes")]
    VanishingConstantTerm,

    #[error("no single-valued logarithm: series winds {winding} times around 0 on |z| = {radius}")]
    NonZeroWinding { winding: i64, radius: f64 },

    #[error("zero {0} must satisfy 0 < |zero| < 1")]
    InvalidZero(Complex64),

    #[error("evaluation point {z} is within 1e-12 of the pole {pole}")]
    PoleProximity { z: Complex64, pole: Complex64 },

    #[error("expansion radius {radius} reaches the nearest pole radius {pole_radius}")]
    BeyondPole { radius: f64, pole_radius: f64 },

    #[error("function must be analytic past the unit circle (radius {0} <= 1)")]
    NotAnalyticPastCircle(f64),

    #[error("sampled modulus {0} on the unit circle exceeds 1 + tolerance")]
    ModulusExceedsOne(f64),

    #[error("boundary set undecided: near-unimodular samples cover {fraction:.4} of the circle")]
    BoundarySetUndecided { fraction: f64 },

    #[error("Blaschke certification failed: reconstruction differs by {0:e}")]
    CertificationFailed(f64),

    #[error("point {w} is too close to the sampled curve (distance {distance:e}, required > {required:e})")]
    PointTooClose {
        w: Complex64,
        distance: f64,
        required: f64,
    },

    #[error("a zero lies on or near the circle |z| = {0}")]
    ZeroOnBoundary(f64),

    #[error("zero search did not converge after {0} subdivisions")]
    NoConvergence(usize),

    #[error("cell multiplicity {0} exceeds the cap of 12")]
    MultiplicityCap(i64),

    #[error("invalid rotation angle: {0}")]
    InvalidAngle(String),

    #[error("rotation is aperiodic; an exact rational angle is required")]
    NotPeriodic,

    #[error("operator symbol must be a rotation")]
    NotRotationSymbol,

    #[error("operator symbol must be elliptic")]
    NotEllipticSymbol,

    #[error("fixed point {0} must lie in the open unit disc")]
    FixedPointOutsideDisc(Complex64),

    #[error("Blaschke weight zero {zero} must satisfy |zero| < r = {r}")]
    WeightZeroOutsideRadius { zero: Complex64, r: f64 },

    #[error("symbol is not elliptic ({0}); only elliptic automorphisms are representable")]
    NonElliptic(String),

    #[error("at least {min} basis images are required, got {got}")]
    TooFewImages { min: usize, got: usize },

    #[error("invalid seminorm radii: {0}")]
    InvalidRadii(String),

    #[error("operator is not isometric at r = {radius}: {lhs} vs {rhs}")]
    NotIsometric { radius: f64, lhs: f64, rhs: f64 },

    #[error("basis images cannot be classified: {0}")]
    StructureMismatch(String),

    #[error("scalar {0} must be unimodular")]
    NotUnimodular(Complex64),

    #[error("eigenvalue {lambda} does not match m(0) = {m0}")]
    ResonanceUnmet { lambda: Complex64, m0: Complex64 },

    #[error("small denominator {value:e} at index {index}")]
    SmallDenominator { index: usize, value: f64 },

    #[error("intertwiner vanishes inside the working disc")]
    VanishingIntertwiner,

    #[error("similarity residual {residual:e} exceeds tolerance {tolerance:e}")]
    VerificationFailed { residual: f64, tolerance: f64 },

    #[error("m_N is not a constant: residue-0 coefficient {index} has modulus {modulus:e}")]
    ProductNotConstant { index: usize, modulus: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
