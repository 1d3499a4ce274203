mod common;

use std::collections::BTreeSet;

use common::*;
use holisom::spectra::spectrum_blaschke_periodic;
use holisom::{
    point_spectrum_oracle, spectrum_isometry, BlaschkeProduct, Membership, MembershipOracle,
    RotationAngle, SpectrumReport, Symbol, WCOp, Weight,
};
use num_complex::Complex64;
use proptest::prelude::*;

/// Blaschke product with zeros inside the disc of radius `r`.
fn weight_inside(r: f64) -> impl Strategy<Value = BlaschkeProduct> {
    (
        0.0..std::f64::consts::TAU,
        0u32..=1,
        prop::collection::vec((0.05..0.95, 0.0..std::f64::consts::TAU), 0..=2),
    )
        .prop_map(move |(theta, order, zeros)| {
            let zeros = zeros.into_iter().map(|(s, t)| Complex64::from_polar(s * r, t)).collect();
            BlaschkeProduct::new(theta, order, zeros).unwrap()
        })
        .prop_filter("non-constant", |b| b.degree() > 0)
}

fn periodic_case() -> impl Strategy<Value = (BlaschkeProduct, f64, RotationAngle)> {
    (0.4f64..0.9, 1i64..=4)
        .prop_flat_map(|(r, q)| (weight_inside(r), Just(r), (0..q).prop_map(move |p| RotationAngle::rational(p, q).unwrap())))
}

fn bits(z: Complex64) -> (u64, u64) {
    (z.re.to_bits(), z.im.to_bits())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_points_lie_inside((b, r, beta) in periodic_case()) {
        let report = spectrum_blaschke_periodic(&b, r, &beta).unwrap();
        let oracle = MembershipOracle::new(&report);
        let w = WCOp::new(Weight::blaschke(b.clone(), r).unwrap(), Symbol::Rotation(beta)).unwrap();
        let diagonal = point_spectrum_oracle(&w, 6).unwrap();
        if b.origin_order() > 0 {
            prop_assert!(diagonal.iter().all(|v| v.norm() == 0.0));
        }
        for lambda in diagonal.into_iter().filter(|v| v.norm() > 1e-12) {
            prop_assert_eq!(oracle.classify(lambda), Membership::Inside);
        }
    }

    #[test]
    fn outside_beyond_the_bound((b, r, beta) in periodic_case()) {
        let report = spectrum_blaschke_periodic(&b, r, &beta).unwrap();
        let SpectrumReport::Region(region) = &report else { panic!("expected a region") };
        let oracle = MembershipOracle::new(&report);
        let bound = region.outer_radius * (1.0 + 1e-3);
        for k in 0..64 {
            let lambda = Complex64::from_polar(bound, std::f64::consts::TAU * k as f64 / 64.0);
            prop_assert_eq!(oracle.classify(lambda), Membership::Outside);
        }
    }

    #[test]
    fn inside_is_star_shaped_for_monomials(k in 1u32..=3, r in 0.4f64..0.9, q in 1i64..=4, t in 0.0f64..std::f64::consts::TAU) {
        let beta = RotationAngle::rational(1, q).unwrap();
        let report = spectrum_blaschke_periodic(&BlaschkeProduct::monomial(0.3, k), r, &beta).unwrap();
        let oracle = MembershipOracle::new(&report);
        let edge = r.powi(-(k as i32));
        for s in [0.999, 0.9, 0.5, 0.1, 0.0] {
            let lambda = Complex64::from_polar(s * edge, t);
            prop_assert_eq!(oracle.classify(lambda), Membership::Inside, "s = {}", s);
        }
        for k in 0..64 {
            let lambda = Complex64::from_polar(1.001 * edge, t + std::f64::consts::TAU * k as f64 / 64.0);
            prop_assert_eq!(oracle.classify(lambda), Membership::Outside);
        }
    }

    #[test]
    fn isometry_spectrum_is_the_oracle_diagonal(alpha in unimodular(), q in 1i64..=12, p in 0i64..12, extra in 0usize..6) {
        let beta = RotationAngle::rational(p % q, q).unwrap();
        let period = beta.period().unwrap() as usize;
        let SpectrumReport::FiniteSet { points, .. } = spectrum_isometry(alpha, &beta).unwrap() else {
            panic!("periodic isometries have finite spectra")
        };
        let diagonal = point_spectrum_oracle(&WCOp::isometry(alpha, beta), period - 1 + extra).unwrap();
        let expected: BTreeSet<_> = points.iter().copied().map(bits).collect();
        let found: BTreeSet<_> = diagonal.into_iter().map(bits).collect();
        prop_assert_eq!(expected, found);
        for (i, a) in points.iter().enumerate() {
            for b in &points[i + 1..] {
                prop_assert!((a - b).norm() > 1e-10);
            }
        }
    }
}

/// For a periodic rotation the region can reach past r^{-d}: with one zero at
/// 0.2 and r = 0.5, m = B(z/r) maps 1.9 to 1.7/0.62 > 2.5.
#[test]
fn periodic_region_can_exceed_the_aperiodic_radius() {
    let b = BlaschkeProduct::new(0.0, 0, vec![Complex64::new(0.2, 0.0)]).unwrap();
    let report = spectrum_blaschke_periodic(&b, 0.5, &RotationAngle::rational(0, 1).unwrap()).unwrap();
    let SpectrumReport::Region(region) = &report else { panic!("expected a region") };
    assert!((region.outer_radius - 3.0).abs() < 1e-4);
    assert_eq!(MembershipOracle::new(&report).classify(Complex64::new(2.5, 0.0)), Membership::Inside);
}
