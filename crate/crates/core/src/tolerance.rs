//! Numerical thresholds shared across modules.

/// Default truncation degree for series produced by operators.
pub const WORKING_DEGREE: usize = 64;

/// Default absolute tolerance for equality of reals and complexes.
pub const EQ_TOL: f64 = 1e-9;

/// Coefficients below this modulus count as zero when canonicalizing.
pub const ZERO_COEFF: f64 = 1e-14;

/// Resolution of the unimodularity test on the unit circle.
pub const BOUNDARY_TOL: f64 = 1e-6;

/// Distance at which an evaluation point is considered to hit a pole.
pub const POLE_GUARD: f64 = 1e-12;

/// Per-coefficient tolerance for structural checks on basis images.
pub const STRUCTURE_TOL: f64 = 1e-8;

/// Extra slack added to sup-norm comparisons.
pub const SUP_SLACK: f64 = 1e-8;

/// Pivot tolerance for series division.
pub const PIVOT_TOL: f64 = 1e-12;

/// Guard band around the image curve for spectral membership.
pub const MEMBERSHIP_GUARD: f64 = 1e-6;

/// Small-denominator guard for the eigenfunction recursion.
pub const SMALL_DENOMINATOR: f64 = 1e-10;

/// Default tolerance for accepting an intertwiner.
pub const SIMILARITY_TOL: f64 = 1e-7;
