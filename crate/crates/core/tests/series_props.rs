mod common;

use common::*;
use holisom::TaylorSeries;
use num_complex::Complex64;
use proptest::prelude::*;

const GRID: usize = 20_000;

fn grid_max(f: &TaylorSeries, r: f64) -> f64 {
    (0..GRID)
        .map(|j| {
            let z = Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / GRID as f64);
            f.eval(z).unwrap().norm()
        })
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sup_matches_dense_grid(f in polynomial(8, 1.0), g in polynomial(8, 1.0), r in 0.05f64..0.99) {
        let fg = f.multiply(&g);
        let sup = fg.sup_on_circle(r, 512).unwrap();
        let dense = grid_max(&fg, r);
        let grid_error = std::f64::consts::PI * r / GRID as f64 * fg.derivative_bound(r);
        prop_assert!(dense <= sup.value + sup.error_bound + 1e-12);
        prop_assert!(sup.value <= dense + grid_error + 1e-12);

        let sf = f.sup_on_circle(r, 512).unwrap();
        let sg = g.sup_on_circle(r, 512).unwrap();
        prop_assert!(sup.value <= (sf.value + sf.error_bound) * (sg.value + sg.error_bound) + 1e-12);
    }

    #[test]
    fn seminorms_increase_with_radius(f in polynomial(8, 1.0), a in 0.01f64..0.98, b in 0.01f64..0.98) {
        let (r1, r2) = if a < b { (a, b) } else { (b, a) };
        let s1 = f.sup_on_circle(r1, 256).unwrap();
        let s2 = f.sup_on_circle(r2, 256).unwrap();
        prop_assert!(s1.value <= s2.value + s1.error_bound + s2.error_bound + 1e-12);
    }

    #[test]
    fn rotation_preserves_seminorms(f in polynomial(10, 1.0), beta in angle(), r in 0.05f64..0.99) {
        let s = f.sup_on_circle(r, 512).unwrap();
        let t = f.compose_rotation(&beta).sup_on_circle(r, 512).unwrap();
        prop_assert!((s.value - t.value).abs() <= s.error_bound + t.error_bound + 1e-12);
    }

    #[test]
    fn exp_inverts_log(
        m0 in (2.0f64..10.0, 0.0..std::f64::consts::TAU),
        rest in prop::collection::vec(complex_in_box(1.0), 1..=16),
    ) {
        // Keep m zero-free on the closed unit disc: Σ|m_k| ≤ 0.8|m0|.
        let m0 = Complex64::from_polar(m0.0, m0.1);
        let mass: f64 = rest.iter().map(|a| a.norm()).sum();
        let scale = (0.8 * m0.norm() / mass).min(1.0);
        let mut coeffs = vec![m0];
        coeffs.extend(rest.iter().map(|a| a * scale));
        let m = TaylorSeries::polynomial(coeffs);
        let degree = m.degree();
        let back = m.log_series(degree).unwrap().exp_series(degree);
        prop_assert!(back.max_coeff_diff(&m, degree) < 1e-9);
    }
}
