//! Winding numbers, from sampled curves or from adaptively sampled maps.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::TaylorSeries;

/// Winding number of a closed sampled curve around `w`. The closing segment
/// from the last sample back to the first is included. Requires the distance
/// from `w` to every sample to exceed ten times the largest adjacent spacing.
pub fn winding_number(curve: &[Complex64], w: Complex64) -> Result<i64> {
    if curve.len() < 3 {
        return Err(Error::InvalidInput(
            "a closed curve needs at least 3 samples".into(),
        ));
    }
    let n = curve.len();
    let spacing = (0..n)
        .map(|j| (curve[(j + 1) % n] - curve[j]).norm())
        .fold(0.0, f64::max);
    let distance = curve.iter().map(|z| (z - w).norm()).fold(f64::INFINITY, f64::min);
    if !(distance > 10.0 * spacing) {
        return Err(Error::PointTooClose {
            w,
            distance,
            required: 10.0 * spacing,
        });
    }
    let total: f64 = (0..n)
        .map(|j| ((curve[(j + 1) % n] - w) / (curve[j] - w)).arg())
        .sum();
    Ok((total / TAU).round() as i64)
}

/// Reasons an adaptive argument accumulation can fail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum ArgFailure {
    /// The map came within the floor of zero.
    NearZero,
    /// Bisection depth was exhausted.
    Unresolved,
}

/// Net change of arg g(t) for t ∈ [0, 1], sampling adaptively: an interval
/// is bisected until consecutive values differ by at most half their
/// smaller modulus. `g` returns the value and a floor below which the value
/// is indistinguishable from zero. Also returns the smallest modulus seen.
pub(crate) fn arg_change(
    g: &impl Fn(f64) -> (Complex64, f64),
    initial: usize,
) -> std::result::Result<(f64, f64), ArgFailure> {
    let initial = initial.max(2);
    let mut total = 0.0;
    let mut min_modulus = f64::INFINITY;
    let mut t0 = 0.0;
    let mut g0 = g(0.0);
    for j in 1..=initial {
        let t1 = j as f64 / initial as f64;
        let g1 = g(t1);
        total += segment(g, (t0, g0), (t1, g1), 0, &mut min_modulus)?;
        t0 = t1;
        g0 = g1;
    }
    Ok((total, min_modulus))
}

pub(crate) type Sample = (f64, (Complex64, f64));

pub(crate) fn segment(
    g: &impl Fn(f64) -> (Complex64, f64),
    (t0, (g0, floor0)): Sample,
    (t1, (g1, floor1)): Sample,
    depth: usize,
    min_modulus: &mut f64,
) -> std::result::Result<f64, ArgFailure> {
    let (a, b) = (g0.norm(), g1.norm());
    *min_modulus = min_modulus.min(a).min(b);
    if a <= floor0 || b <= floor1 {
        return Err(ArgFailure::NearZero);
    }
    if (g1 - g0).norm() <= 0.5 * a.min(b) {
        return Ok((g1 / g0).arg());
    }
    if depth >= 48 {
        return Err(ArgFailure::Unresolved);
    }
    let tm = 0.5 * (t0 + t1);
    let gm = g(tm);
    Ok(
        segment(g, (t0, (g0, floor0)), (tm, gm), depth + 1, min_modulus)?
            + segment(g, (tm, gm), (t1, (g1, floor1)), depth + 1, min_modulus)?,
    )
}

/// Rounds an accumulated argument change to whole turns.
pub(crate) fn whole_turns(total: f64) -> std::result::Result<i64, ArgFailure> {
    let turns = total / TAU;
    if (turns - turns.round()).abs() > 0.25 {
        return Err(ArgFailure::Unresolved);
    }
    Ok(turns.round() as i64)
}

/// Horner evaluation with a running bound on its rounding error.
pub(crate) fn eval_with_floor(f: &TaylorSeries, z: Complex64) -> (Complex64, f64) {
    let value = f.horner(z);
    let floor = 32.0 * f64::EPSILON * f.majorant(z.norm()) * (f.degree() + 1) as f64;
    (value, floor.max(f64::MIN_POSITIVE))
}

/// Winding number of f around 0 on |z| = radius, with the smallest sampled
/// modulus.
pub(crate) fn circle_winding(f: &TaylorSeries, radius: f64) -> Result<(i64, f64)> {
    let g = |t: f64| eval_with_floor(f, Complex64::from_polar(radius, TAU * t));
    let initial = (8 * (f.degree() + 1)).max(64);
    arg_change(&g, initial)
        .and_then(|(total, min)| Ok((whole_turns(total)?, min)))
        .map_err(|_| Error::ZeroOnBoundary(radius))
}

/// Number of zeros (with multiplicity) of the truncated polynomial inside
/// |z| < radius.
pub fn winding_on_circle(f: &TaylorSeries, radius: f64) -> Result<i64> {
    circle_winding(f, radius).map(|(w, _)| w)
}

/// Uniform samples of the circle |z| = radius.
pub fn circle(radius: f64, samples: usize) -> Vec<Complex64> {
    (0..samples)
        .map(|j| Complex64::from_polar(radius, TAU * j as f64 / samples as f64))
        .collect()
}
