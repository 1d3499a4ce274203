#![allow(dead_code)]

use holisom::{BlaschkeProduct, RotationAngle, TaylorSeries};
use num_complex::Complex64;
use proptest::prelude::*;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn complex_in_box(bound: f64) -> impl Strategy<Value = Complex64> {
    (-bound..bound, -bound..bound).prop_map(|(re, im)| c(re, im))
}

pub fn unimodular() -> impl Strategy<Value = Complex64> {
    (0.0..std::f64::consts::TAU).prop_map(|t| Complex64::from_polar(1.0, t))
}

pub fn complex_in_disc(max_modulus: f64) -> impl Strategy<Value = Complex64> {
    (0.0..max_modulus, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

/// Polynomial with coefficients in the box [-bound, bound]².
pub fn polynomial(max_degree: usize, bound: f64) -> impl Strategy<Value = TaylorSeries> {
    prop::collection::vec(complex_in_box(bound), 1..=max_degree + 1).prop_map(TaylorSeries::polynomial)
}

pub fn rational_angle() -> impl Strategy<Value = RotationAngle> {
    (1i64..=12)
        .prop_flat_map(|q| (0..q, Just(q)))
        .prop_map(|(p, q)| RotationAngle::rational(p, q).unwrap())
}

pub fn irrational_angle() -> impl Strategy<Value = RotationAngle> {
    (0.01f64..0.99).prop_map(|x| RotationAngle::irrational(x).unwrap())
}

pub fn angle() -> impl Strategy<Value = RotationAngle> {
    prop_oneof![rational_angle(), irrational_angle()]
}

/// Blaschke product with up to `max_zeros` zeros of modulus in (0.05, max_modulus].
pub fn blaschke(max_zeros: usize, max_modulus: f64) -> impl Strategy<Value = BlaschkeProduct> {
    (
        0.0..std::f64::consts::TAU,
        0u32..=2,
        prop::collection::vec((0.05..max_modulus, 0.0..std::f64::consts::TAU), 0..=max_zeros),
    )
        .prop_map(|(theta, order, zeros)| {
            let zeros = zeros.into_iter().map(|(r, t)| Complex64::from_polar(r, t)).collect();
            BlaschkeProduct::new(theta, order, zeros).unwrap()
        })
}

/// Hausdorff distance between two finite point sets.
pub fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let one_sided = |x: &[Complex64], y: &[Complex64]| {
        x.iter()
            .map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    one_sided(a, b).max(one_sided(b, a))
}

/// Distance between angles on the circle.
pub fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(std::f64::consts::TAU);
    d.min(std::f64::consts::TAU - d)
}
