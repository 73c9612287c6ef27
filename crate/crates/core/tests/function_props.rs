use std::f64::consts::PI;

use hardy_gkz::function::{
    boundary_samples, herglotz_transform, hp_norm, taylor_from_boundary, BoundaryFunction,
    DiskFunction, HpNormSpec,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn polynomial(max_degree: usize) -> impl Strategy<Value = DiskFunction> {
    prop::collection::vec(complex(), 1..=max_degree + 1).prop_map(DiskFunction::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boundary_round_trip(f in polynomial(200)) {
        let n = 512;
        let b = boundary_samples(&f, n).unwrap();
        let back = taylor_from_boundary(&b, f.degree()).unwrap();
        let scale = f.taylor.iter().map(|c| c.norm()).fold(1.0, f64::max);
        prop_assert!(back.max_deviation(&f) <= 1e-12 * scale);
    }

    #[test]
    fn parseval(f in polynomial(128)) {
        let norm = hp_norm(&f, HpNormSpec::hardy(2.0).unwrap(), 512).unwrap();
        let direct = f.l2_coefficient_norm();
        prop_assert!((norm - direct).abs() <= 1e-12 * direct.max(1e-300));
    }

    #[test]
    fn norm_monotonicity(f in polynomial(64)) {
        let sup = hp_norm(&f, HpNormSpec::hardy(f64::INFINITY).unwrap(), 256).unwrap();
        let two = hp_norm(&f, HpNormSpec::hardy(2.0).unwrap(), 256).unwrap();
        prop_assert!(sup >= two * (1.0 - 1e-12));
        prop_assert!(two >= f.coeff(0).norm() * (1.0 - 1e-12));
    }

    #[test]
    fn herglotz_real_part_is_poisson_integral(
        a in prop::collection::vec(-1.0..1.0f64, 4),
        r in 0.0..0.9f64,
        alpha in 0.0..(2.0 * PI),
    ) {
        let n = 1024;
        let u = move |t: f64| a[0] + a[1] * t.cos() + a[2] * (2.0 * t).sin() + a[3] * (t.sin()).exp();
        let samples: Vec<f64> = (0..n).map(|j| u(2.0 * PI * j as f64 / n as f64)).collect();
        let b = BoundaryFunction::from_real(&samples).unwrap();
        let h = herglotz_transform(&b, n / 2 - 1).unwrap();
        let z = Complex64::from_polar(r, alpha);
        let value = h.evaluate(z).unwrap().re;

        // discrete Poisson integral with the closed-form kernel
        let poisson: f64 = samples
            .iter()
            .enumerate()
            .map(|(j, &v)| {
                let t = 2.0 * PI * j as f64 / n as f64;
                let kernel = (1.0 - r * r) / (1.0 - 2.0 * r * (t - alpha).cos() + r * r);
                kernel * v
            })
            .sum::<f64>()
            / n as f64;
        prop_assert!((value - poisson).abs() <= 1.0 / n as f64, "{} vs {}", value, poisson);
    }
}
