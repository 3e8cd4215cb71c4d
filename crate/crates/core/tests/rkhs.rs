mod common;

use common::*;
use coronakit::kernels::PointSet;
use coronakit::rkhs::{
    build_gram, interpolant_inner, kernel_multiplier_norm_lower, min_norm_interpolation, multiplier_norm_against,
    restricted_multiplier_norm, restricted_vector_norms, shifted_norm, SampleFunction,
};
use coronakit::C64;
use proptest::prelude::*;
use rand::Rng;

fn spec_for(index: usize) -> coronakit::KernelSpec {
    families()[index % 6]
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn gram_is_psd(seed in any::<u64>(), fam in 0usize..6, size in 1usize..13) {
        let mut r = rng(seed);
        let spec = spec_for(fam);
        let pts = random_set(&mut r, &spec, size, 0.95, 1e-3);
        let g = build_gram(&spec, &pts).unwrap();
        prop_assert!(g.min_eig >= -1e-10 * g.max_eig);
        let herm = (&g.entries - g.entries.adjoint()).norm();
        prop_assert!(herm <= 1e-12 * g.entries.norm());
    }

    #[test]
    fn interpolation_norm_grows_with_the_point_set(seed in any::<u64>(), fam in 0usize..6) {
        let mut r = rng(seed);
        let spec = spec_for(fam);
        let pts = random_set(&mut r, &spec, 8, 0.85, 0.1);
        // values of the holomorphic function 1 + z_1 + z_1²/2 (consistent on every subset)
        let f = |p: &coronakit::ComplexPoint| { let z = p.coords[0]; 1.0 + z + z * z * 0.5 };
        let mut last = 0.0;
        for m in 1..=pts.len() {
            let sub = PointSet::new(pts.domain, pts.points[..m].to_vec()).unwrap();
            let g = build_gram(&spec, &sub).unwrap();
            let v = min_norm_interpolation(&g, &SampleFunction::from_fn(&sub, f)).unwrap().value;
            prop_assert!(v >= last * (1.0 - 1e-9), "m={m}: {v} < {last}");
            last = v;
        }
    }

    #[test]
    fn h_poisson_reproduces_point_values(seed in any::<u64>(), fam in 0usize..6, size in 2usize..9) {
        let mut r = rng(seed);
        let spec = spec_for(fam);
        let pts = random_set(&mut r, &spec, size, 0.9, 0.1);
        let g = build_gram(&spec, &pts).unwrap();
        let f = random_values(&mut r, size);
        let ia = r.gen_range(0..size);
        let a = pts.points[ia].clone();
        let kt = g.normalized_kernel_values(&a).unwrap();
        let u: Vec<C64> = f.iter().zip(&kt).map(|(x, y)| x * y).collect();
        let got = interpolant_inner(&g, &u, &kt).unwrap();
        prop_assert!((got - f[ia]).norm() <= 1e-9 * f[ia].norm().max(1e-3), "{got} vs {}", f[ia]);
    }

    #[test]
    fn multiplier_norm_is_shift_invariant(seed in any::<u64>(), fam in 0usize..6, size in 2usize..9) {
        let mut r = rng(seed);
        let spec = spec_for(fam);
        let pts = random_set(&mut r, &spec, size, 0.9, 0.1);
        let g = build_gram(&spec, &pts).unwrap();
        let phi = SampleFunction::scalar(random_values(&mut r, size));
        let a = random_point(&mut r, &spec, 0.9);
        let plain = restricted_multiplier_norm(&g, &phi).unwrap().value;
        let shifted = multiplier_norm_against(&g.shifted(&a).unwrap(), phi.channel(0), g.config.range_cutoff_rel).value;
        prop_assert!(rel_err(plain, shifted) < 1e-9, "{plain} vs {shifted}");
    }

    #[test]
    fn shifted_norm_is_comparable(seed in any::<u64>(), fam in 0usize..6, size in 2usize..9) {
        let mut r = rng(seed);
        let spec = spec_for(fam);
        let pts = random_set(&mut r, &spec, size, 0.9, 0.1);
        let g = build_gram(&spec, &pts).unwrap();
        let f = SampleFunction::scalar(random_values(&mut r, size));
        let a = random_point(&mut r, &spec, 0.9);
        let kt = g.normalized_kernel_values(&a).unwrap();
        let b1 = restricted_multiplier_norm(&g, &SampleFunction::scalar(kt.clone())).unwrap().value;
        let b2 = restricted_multiplier_norm(&g, &SampleFunction::scalar(kt.iter().map(|v| v.inv()).collect())).unwrap().value;
        let plain = min_norm_interpolation(&g, &f).unwrap().value;
        let s = shifted_norm(&g, &a, &f).unwrap().value;
        prop_assert!(s >= plain / b2 * (1.0 - 1e-9) && s <= b1 * plain * (1.0 + 1e-9), "{} ≤ {s} ≤ {}", plain / b2, b1 * plain);
    }

    #[test]
    fn vector_norm_embedding_chain(seed in any::<u64>(), fam in 0usize..6, size in 2usize..9, n in 1usize..4) {
        let mut r = rng(seed);
        let spec = spec_for(fam);
        let pts = random_set(&mut r, &spec, size, 0.9, 0.1);
        let g = build_gram(&spec, &pts).unwrap();
        let phi = SampleFunction::vector((0..n).map(|_| random_values(&mut r, size)).collect());
        let v = restricted_vector_norms(&g, &phi).unwrap();
        let k = kernel_multiplier_norm_lower(&g, &phi, &pts.points).unwrap().value;
        prop_assert!(k <= v.column * (1.0 + 1e-9), "kernel {k} > column {}", v.column);
        prop_assert!(v.column <= (n as f64).sqrt() * v.max * (1.0 + 1e-9), "column {} > √N max {}", v.column, v.max);
    }
}

#[test]
fn certificate_reproduces_value() {
    let mut r = rng(7);
    let spec = coronakit::KernelSpec::szego_disk();
    let pts = random_set(&mut r, &spec, 6, 0.8, 0.1);
    let g = build_gram(&spec, &pts).unwrap();
    let f = SampleFunction::scalar(random_values(&mut r, 6));
    let rep = min_norm_interpolation(&g, &f).unwrap();
    // ‖Σ c_j k_j‖² = c* G c
    let cv = coronakit::linalg::CVec::from_column_slice(&rep.certificate[0]);
    let q = cv.dotc(&(&g.entries * &cv)).re;
    assert!(rel_err(q.sqrt(), rep.value) < 1e-9);
}
