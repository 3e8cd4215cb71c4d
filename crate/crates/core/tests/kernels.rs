mod common;

use common::*;
use coronakit::kernels::{radial_coeff_transform, radial_multiplier, Kernel, PowerSeries1D};
use proptest::prelude::*;

/// Coefficients of `(1 − x)^{−s}` by the recurrence `b_{k+1} = b_k (s+k)/(k+1)`.
fn binomial(s: f64, len: usize) -> Vec<f64> {
    let mut out = vec![1.0];
    for k in 0..len - 1 {
        out.push(out[k] * (s + k as f64) / (k as f64 + 1.0));
    }
    out
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn hermitian_positive_diagonal_and_distance_bounds(seed in any::<u64>()) {
        let mut r = rng(seed);
        for spec in families() {
            let k = Kernel::new(spec).unwrap();
            let x = random_point(&mut r, &spec, 0.95);
            let y = random_point(&mut r, &spec, 0.95);
            let kxy = k.eval(&x, &y).unwrap();
            let kyx = k.eval(&y, &x).unwrap();
            prop_assert!((kxy - kyx.conj()).norm() <= 1e-12 * kxy.norm().max(1.0));
            prop_assert!(k.eval(&x, &x).unwrap().re > 0.0);
            prop_assert!(k.eval(&x, &x).unwrap().im.abs() <= 1e-12 * k.diag(&x));
            let d = k.distance(&x, &y).unwrap();
            prop_assert!((0.0..=1.0).contains(&d), "{spec:?}: d = {d}");
            prop_assert!(k.distance(&x, &x).unwrap().abs() < 1e-7);
        }
    }

    #[test]
    fn radial_transform_round_trip(gamma in -0.9f64..3.0, t in -0.9f64..3.0, n in 1usize..4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = PowerSeries1D::new(random_values(&mut r, 40));
        let there = radial_coeff_transform(gamma, t, n, &s, false).unwrap();
        let back = radial_coeff_transform(gamma, t, n, &there, true).unwrap();
        for (a, b) in s.coeffs.iter().zip(&back.coeffs) {
            prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
        }
    }

    #[test]
    fn radial_operator_raises_the_bergman_exponent(gamma in -0.5f64..2.0, t in 0.0f64..2.0, n in 1usize..4) {
        // R^{γ,t} (1 − w̄z)^{−(n+1+γ)} = (1 − w̄z)^{−(n+1+γ+t)}
        let s = n as f64 + 1.0 + gamma;
        let from = binomial(s, 65);
        let to = binomial(s + t, 65);
        for k in 0..65 {
            let got = from[k] * radial_multiplier(gamma, t, n, k).unwrap();
            prop_assert!(rel_err(got, to[k]) < 1e-11, "k={k}: {got} vs {}", to[k]);
        }
    }
}

#[test]
fn zhu_anchor_bergman_to_cubic() {
    let from = binomial(2.0, 65);
    for (k, f) in from.iter().enumerate() {
        // (1−x)^{-3} has coefficients (k+1)(k+2)/2
        let expected = (k as f64 + 1.0) * (k as f64 + 2.0) / 2.0;
        assert!(rel_err(f * radial_multiplier(0.0, 1.0, 1, k).unwrap(), expected) < 1e-12);
    }
}

#[test]
fn szego_closed_form() {
    let k = Kernel::new(coronakit::KernelSpec::szego_disk()).unwrap();
    let x = coronakit::ComplexPoint::scalar(c(0.3, 0.4));
    let y = coronakit::ComplexPoint::scalar(c(-0.1, 0.2));
    // k(x, y) = k_y(x) = 1 / (1 − x ȳ)
    let expected = (c(1.0, 0.0) - c(0.3, 0.4) * c(-0.1, 0.2).conj()).inv();
    assert!((k.eval(&x, &y).unwrap() - expected).norm() < 1e-15);
}
