mod common;

use common::*;
use coronakit::rescaling::{apply_rescaling, check_rescaling, matrix_distance, Violation};
use coronakit::rkhs::build_gram;
use coronakit::C64;
use proptest::prelude::*;
use rand::Rng;

fn instance(seed: u64) -> (coronakit::linalg::CMat, Vec<C64>) {
    let mut r = rng(seed);
    let spec = families()[r.gen_range(0..6)];
    let size = r.gen_range(2..10);
    let pts = random_set(&mut r, &spec, size, 0.9, 0.05);
    let k = build_gram(&spec, &pts).unwrap().entries;
    let psi = (0..size).map(|_| C64::from_polar(r.gen_range(0.3..3.0), r.gen_range(-3.0..3.0))).collect();
    (k, psi)
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn forged_rescalings_round_trip(seed in any::<u64>()) {
        let (k, psi) = instance(seed);
        let big = apply_rescaling(&k, &psi).unwrap();
        let check = check_rescaling(&big, &k, 1e-8).unwrap();
        prop_assert!(check.is_rescaling, "{:?}", check.violation);
        let w = check.witness.unwrap();
        prop_assert!(w.theta[0] == 0.0);
        let again = apply_rescaling(&k, &w.psi).unwrap();
        prop_assert!((&again - &big).norm() <= 1e-8 * big.norm());
        for i in 0..k.nrows() {
            // |ψ_j| = √(K_jj / k_jj)
            prop_assert!(rel_err(w.psi[i].norm(), (big[(i, i)].re / k[(i, i)].re).sqrt()) < 1e-10);
            for j in 0..k.nrows() {
                prop_assert!((matrix_distance(&big, i, j) - matrix_distance(&k, i, j)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn witness_is_phase_gauged(seed in any::<u64>(), phase in -3.0f64..3.0) {
        let (k, psi) = instance(seed);
        let rotated: Vec<C64> = psi.iter().map(|p| p * C64::from_polar(1.0, phase)).collect();
        // K is unchanged by a global phase of ψ, so the witness must be too
        let a = check_rescaling(&apply_rescaling(&k, &psi).unwrap(), &k, 1e-8).unwrap().witness.unwrap();
        let b = check_rescaling(&apply_rescaling(&k, &rotated).unwrap(), &k, 1e-8).unwrap().witness.unwrap();
        let u = b.psi[0] / a.psi[0];
        prop_assert!((u.norm() - 1.0).abs() < 1e-8);
        for (x, y) in a.psi.iter().zip(&b.psi) {
            prop_assert!((x * u - y).norm() <= 1e-8 * y.norm());
        }
    }

    #[test]
    fn acceptance_is_symmetric_with_reciprocal_witness(seed in any::<u64>()) {
        let (k, psi) = instance(seed);
        let big = apply_rescaling(&k, &psi).unwrap();
        let fwd = check_rescaling(&big, &k, 1e-8).unwrap();
        let back = check_rescaling(&k, &big, 1e-8).unwrap();
        prop_assert_eq!(fwd.is_rescaling, back.is_rescaling);
        let (f, b) = (fwd.witness.unwrap(), back.witness.unwrap());
        for (x, y) in f.psi.iter().zip(&b.psi) {
            prop_assert!((x * y - C64::new(1.0, 0.0)).norm() < 1e-8);
        }
    }

    #[test]
    fn perturbed_moduli_are_rejected(seed in any::<u64>()) {
        let (k, psi) = instance(seed);
        let n = k.nrows();
        let mut r = rng(seed ^ 0x5eed);
        let i = r.gen_range(0..n);
        let j = (i + r.gen_range(1..n)) % n;
        let mut big = apply_rescaling(&k, &psi).unwrap();
        big[(i, j)] *= 1.0 + 1e-3;
        big[(j, i)] = big[(i, j)].conj();
        let check = check_rescaling(&big, &k, 1e-8).unwrap();
        prop_assert!(!check.is_rescaling);
        match check.violation {
            Some(Violation::Modulus { i: a, j: b, .. }) => {
                prop_assert!((a, b) == (i.min(j), i.max(j)), "reported ({a},{b}) for ({i},{j})")
            }
            other => prop_assert!(false, "unexpected {other:?}"),
        }
    }
}
