mod common;

use common::*;
use coronakit::imp::{falsify_report, slice_g, slice_laplacian, standard_grid, FalsifierConfig};
use proptest::prelude::*;

#[test]
fn laplacian_matches_finite_differences_on_the_standard_grid() {
    let grid = standard_grid(0.8, 20, 21);
    for alpha in [0.3, 0.5, 0.7] {
        for n in [2, 3] {
            let r = falsify_report(&FalsifierConfig::ball(c(alpha, 0.0), n), &grid).unwrap();
            assert!(r.max_fd_relative_error <= 1e-4, "α={alpha} n={n}: {}", r.max_fd_relative_error);
            assert!(r.min_laplacian > 0.0 && r.g_rise > 0.0 && r.falsified);
            println!("α={alpha} n={n}: monotone profile observed = {}", r.radial_monotone);
        }
    }
}

#[test]
fn alpha_zero_is_flat() {
    let cfg = FalsifierConfig::ball(c(0.0, 0.0), 2);
    for z in standard_grid(0.8, 5, 7) {
        assert!((slice_g(&cfg, z).unwrap() - slice_g(&cfg, c(0.0, 0.0)).unwrap()).abs() < 1e-14);
        assert!(slice_laplacian(&cfg, z).unwrap().abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn quadrature_has_converged_at_1024_nodes(seed in any::<u64>(), n in 2usize..4) {
        let mut r = rng(seed);
        let alpha = disk_point(&mut r, 0.7);
        let z = disk_point(&mut r, 0.9);
        let coarse = FalsifierConfig { lambda_nodes: 1024, ..FalsifierConfig::ball(alpha, n) };
        let fine = FalsifierConfig { lambda_nodes: 2048, ..coarse.clone() };
        prop_assert!((slice_g(&coarse, z).unwrap() - slice_g(&fine, z).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn polydisc_slice_is_the_two_ball(seed in any::<u64>(), n in 2usize..6) {
        let mut r = rng(seed);
        let alpha = disk_point(&mut r, 0.7);
        let z = disk_point(&mut r, 0.9);
        let poly = slice_g(&FalsifierConfig::polydisc(alpha, n), z).unwrap();
        let ball = slice_g(&FalsifierConfig::ball(alpha, 2), z).unwrap();
        prop_assert!((poly - ball).abs() < 1e-15);
    }
}
