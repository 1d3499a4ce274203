//! Linear isometries of the space of holomorphic functions on the unit disc,
//! operators similar to them, and their spectra, in computable form.
//!
//! Functions are truncated power series ([`TaylorSeries`]); operators are
//! weighted composition operators f ↦ m·(f∘φ) with rotation or elliptic
//! automorphism symbols ([`WeightedCompositionOperator`]).

// `!(x > 0.0)` guards deliberately reject NaN; recurrences index by position.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod angle;
pub mod blaschke;
pub mod error;
pub mod isometry;
pub mod series;
pub mod similarity;
pub mod spectra;
pub mod tolerance;
pub mod wco;

pub use angle::{Diophantine, RotationAngle};
pub use blaschke::{BlaschkeProduct, BoundaryModulusReport, BoundaryVerdict};
pub use error::{Error, Result};
pub use isometry::{
    classify_one_seminorm, classify_two_seminorm, metric_d, test_isometry, Classification,
    IsometryVerdict, MetricValue, MetricVariant, SeminormFamily, Verdict, ViolationWitness,
};
pub use similarity::{
    build_intertwiner_aperiodic, build_intertwiner_periodic, decide_similarity,
    decide_similarity_spec, verify_similarity, Decision, Intertwiner, IntertwinerKind, Reason,
    SimilarityVerdict, Target,
};
pub use series::{CircleSup, TaylorSeries};
pub use spectra::{
    classify_point, membership_grid, point_spectrum_oracle, spectrum_blaschke_aperiodic,
    spectrum_blaschke_periodic, spectrum_isometry, spectrum_of, Membership, MembershipOracle,
    Orbit, Region, SpectrumReport, Window,
};
pub use wco::{
    is_composition_operator, MobiusInvolution, OperatorSpec, Symbol, SymbolSpec, WCOp, Weight,
    WeightedCompositionOperator,
};
