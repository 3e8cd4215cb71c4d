mod common;

use common::*;
use coronakit::convex_poisson::{
    convex_shift_norm, divide_by_kernel, random_competitors, saddle_value, BezoutSolver, SaddleOptions, ShiftConfig,
};
use coronakit::linalg::{CMat, CVec};
use coronakit::rkhs::{min_norm_interpolation, shifted_norm, SampleFunction};
use coronakit::C64;
use proptest::prelude::*;
use rand::Rng;

fn ones(n: usize) -> SampleFunction {
    SampleFunction::constant(n, C64::new(1.0, 0.0))
}

/// Null-space QP oracle: minimise `Σ_ℓ g_ℓ* Q g_ℓ` subject to
/// `Σ_ℓ φ_ℓ(x_i) g_ℓ(x_i) = rhs_i`, by parametrising the affine feasible set.
fn null_space_min(q: &CMat, phi: &SampleFunction, rhs: &[C64]) -> f64 {
    let (n, big_n) = (phi.len(), phi.num_channels());
    let dim = n * big_n;
    let mut qq = CMat::zeros(dim, dim);
    for l in 0..big_n {
        qq.view_mut((l * n, l * n), (n, n)).copy_from(q);
    }
    // particular solution g0 and, per point, N−1 orthonormal null directions
    let mut g0 = CVec::zeros(dim);
    let mut z_cols: Vec<CVec> = Vec::new();
    for i in 0..n {
        let p: Vec<C64> = (0..big_n).map(|l| phi.channels[l][i]).collect();
        let pp: f64 = p.iter().map(|v| v.norm_sqr()).sum();
        for l in 0..big_n {
            g0[l * n + i] = p[l].conj() * rhs[i] / pp;
        }
        // Gram–Schmidt on e_ℓ against conj(p)
        let mut basis: Vec<Vec<C64>> = vec![p.iter().map(|v| v.conj() / pp.sqrt()).collect()];
        for e in 0..big_n {
            let mut v = vec![C64::new(0.0, 0.0); big_n];
            v[e] = C64::new(1.0, 0.0);
            for b in &basis {
                let d: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vk, bk) in v.iter_mut().zip(b) {
                    *vk -= d * bk;
                }
            }
            let nv = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if nv > 1e-8 && basis.len() < big_n {
                basis.push(v.iter().map(|x| x / nv).collect());
            }
        }
        for b in basis.iter().skip(1) {
            let mut col = CVec::zeros(dim);
            for l in 0..big_n {
                col[l * n + i] = b[l];
            }
            z_cols.push(col);
        }
    }
    if z_cols.is_empty() {
        return g0.dotc(&(&qq * &g0)).re;
    }
    let z = CMat::from_columns(&z_cols);
    let lhs = z.adjoint() * &qq * &z;
    let rhs_v = -(z.adjoint() * &qq * &g0);
    let y = lhs.lu().solve(&rhs_v).unwrap();
    let g = &g0 + &z * y;
    g.dotc(&(&qq * &g)).re
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn kkt_matches_null_space_oracle(seed in any::<u64>(), size in 3usize..12, n in 1usize..4, m in 0usize..4) {
        let mut r = rng(seed);
        let inst = bezout_instance(&mut r, size, n, m, false);
        let solver = BezoutSolver::new(&inst.gram, &inst.phi, &ones(size), &inst.base, inst.c).unwrap();
        let theta = random_simplex(&mut r, m + 1);
        let s = solver.solve(&theta).unwrap();
        let oracle = null_space_min(&solver.forms.combine(&theta), &inst.phi, &vec![C64::new(1.0, 0.0); size]);
        prop_assert!(rel_err(s.norm * s.norm, oracle) < 1e-8, "{} vs {oracle}", s.norm * s.norm);
        prop_assert!(s.residual <= 1e-9 * 2.0);
    }

    #[test]
    fn value_function_is_concave(seed in any::<u64>(), size in 3usize..10, n in 1usize..4, m in 1usize..4) {
        let mut r = rng(seed);
        let inst = bezout_instance(&mut r, size, n, m, false);
        let solver = BezoutSolver::new(&inst.gram, &inst.phi, &ones(size), &inst.base, inst.c).unwrap();
        let v = |t: &[f64]| { let s = solver.solve(t).unwrap(); s.norm * s.norm };
        let (a, b) = (random_simplex(&mut r, m + 1), random_simplex(&mut r, m + 1));
        let mid: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect();
        prop_assert!(v(&mid) >= 0.5 * (v(&a) + v(&b)) - 1e-9 * v(&mid).max(1.0));
    }

    #[test]
    fn weak_duality_against_feasible_competitors(seed in any::<u64>(), size in 3usize..10, n in 1usize..4, m in 1usize..4) {
        let mut r = rng(seed);
        let inst = bezout_instance(&mut r, size, n, m, false);
        let solver = BezoutSolver::new(&inst.gram, &inst.phi, &ones(size), &inst.base, inst.c).unwrap();
        let theta = random_simplex(&mut r, m + 1);
        let s = solver.solve(&theta).unwrap();
        let vt = s.norm * s.norm;
        // any other solution is feasible and can only do worse at θ
        for _ in 0..20 {
            let other = solver.solve(&random_simplex(&mut r, m + 1)).unwrap();
            let f: f64 = solver.forms.components(&other.g).iter().zip(&theta).map(|(c, t)| c * t).sum();
            prop_assert!(vt <= f * (1.0 + 1e-9));
        }
        let saddle = saddle_value(&solver, &inst.base, &SaddleOptions::default()).unwrap();
        for f in random_competitors(&solver, &saddle.g_star.g, 20, seed) {
            prop_assert!(saddle.value <= f * (1.0 + 1e-9), "{} > {f}", saddle.value);
        }
    }

    #[test]
    fn convex_norm_bounded_by_worst_single_shift(seed in any::<u64>(), size in 3usize..10, m in 1usize..4) {
        let mut r = rng(seed);
        let inst = bezout_instance(&mut r, size, 1, m, false);
        // f = 1/φ solves φ·f = 1
        let f = SampleFunction::scalar(inst.phi.channel(0).iter().map(|v| v.inv()).collect());
        let shift = ShiftConfig { base_points: inst.base.clone(), theta: random_simplex(&mut r, m + 1) };
        let cn = convex_shift_norm(&inst.gram, &shift, &f).unwrap();
        let worst = cn.components.iter().cloned().fold(0.0, f64::max);
        prop_assert!(cn.value * cn.value <= worst * (1.0 + 1e-12));
    }

    #[test]
    fn vertices_match_single_shift_minimum(seed in any::<u64>(), size in 3usize..10, m in 1usize..4) {
        let mut r = rng(seed);
        let inst = bezout_instance(&mut r, size, 1, m, false);
        let solver = BezoutSolver::new(&inst.gram, &inst.phi, &ones(size), &inst.base, inst.c).unwrap();
        // with one channel the constraint pins g = 1/φ
        let f = SampleFunction::scalar(inst.phi.channel(0).iter().map(|v| v.inv()).collect());
        for k in 0..=m {
            let mut e = vec![0.0; m + 1];
            e[k] = 1.0;
            let v = solver.solve(&e).unwrap().norm;
            let direct = if k == 0 {
                min_norm_interpolation(&inst.gram, &f).unwrap().value
            } else {
                shifted_norm(&inst.gram, &inst.base[k - 1], &f).unwrap().value
            };
            prop_assert!(rel_err(v, direct) < 1e-8, "vertex {k}: {v} vs {direct}");
        }
    }

    #[test]
    fn dividing_by_the_kernel_preserves_channel_norms(seed in any::<u64>(), size in 3usize..12, n in 1usize..4) {
        let mut r = rng(seed);
        let inst = bezout_instance(&mut r, size, n, 0, false);
        let a = inst.gram.points.points[r.gen_range(0..size)].clone();
        let kt = SampleFunction::scalar(inst.gram.normalized_kernel_values(&a).unwrap());
        let f = BezoutSolver::new(&inst.gram, &inst.phi, &kt, &[], inst.c).unwrap().solve(&[1.0]).unwrap();
        let g = divide_by_kernel(&inst.gram, &inst.phi, &a, &f).unwrap();
        prop_assert!(g.residual <= 1e-12, "residual {}", g.residual);
        for (x, y) in g.per_channel_norms.iter().zip(&f.per_channel_norms) {
            prop_assert!((x - y).abs() <= 1e-12 * y.max(1.0), "{x} vs {y}");
        }
    }
}

#[test]
fn constant_one_has_unit_convex_norm() {
    let mut r = rng(11);
    for _ in 0..10 {
        let inst = bezout_instance(&mut r, 8, 1, 3, true);
        let mut pts = inst.gram.points.clone();
        pts.points[0] = coronakit::ComplexPoint::origin(pts.domain.dim);
        let gram = coronakit::rkhs::build_gram(&inst.gram.kernel.spec().clone(), &pts).unwrap();
        let base: Vec<_> = (1..4).map(|m| pts.points[m].clone()).collect();
        let shift = ShiftConfig { base_points: base, theta: random_simplex(&mut r, 4) };
        let v = convex_shift_norm(&gram, &shift, &ones(8)).unwrap().value;
        assert!((v - 1.0).abs() < 1e-10, "{v}");
    }
}
