//! Box and kernel-testing Carleson norms of a few discrete measures, the
//! Besov–Sobolev reproducing property, and the K_p^σ algebra inequality.

use coronakit::carleson::{
    besov_pairing_disk, box_norm, default_probes, kps_norm_disk, testing_norm, BesovParams, DiscreteMeasure,
};
use coronakit::kernels::{besov_kernel_coeffs, PowerSeries1D};
use coronakit::C64;

fn main() -> coronakit::Result<()> {
    let radial: Vec<C64> = (1..9).map(|k| C64::new(1.0 - 0.5f64.powi(k), 0.0)).collect();
    let measures = [
        ("unit mass at 0", DiscreteMeasure::disk(&[C64::new(0.0, 0.0)], vec![1.0])?),
        ("dyadic radius", DiscreteMeasure::disk(&radial, (1..9).map(|k| 0.5f64.powi(k)).collect())?),
        (
            "ring r=0.8",
            DiscreteMeasure::disk(
                &(0..24).map(|j| C64::from_polar(0.8, j as f64 * std::f64::consts::PI / 12.0)).collect::<Vec<_>>(),
                vec![0.05; 24],
            )?,
        ),
    ];
    for (name, mu) in &measures {
        let probes = default_probes(mu);
        for sigma in [0.25, 0.5, 1.0] {
            let b = box_norm(mu, sigma, 2.0, 1)?.value;
            let t = testing_norm(mu, sigma, 2.0, &probes)?.value;
            println!("{name:<15} σ={sigma:<4}: box {b:.5}, testing {t:.5}, ratio {:.3}", t / b);
        }
    }

    let params = BesovParams { sigma: 0.5, p: 2.0, alpha: 0.0, m: 1 };
    let w = C64::new(0.4, 0.0);
    let c = besov_kernel_coeffs(0.5, 0.0, 2.0, 64)?;
    let kw = PowerSeries1D::new(c.coeffs.iter().enumerate().map(|(k, ck)| ck * w.conj().powu(k as u32)).collect());
    let z2 = PowerSeries1D::monomial(2, C64::new(1.0, 0.0));
    println!("⟨z², k_0.4⟩ = {:.12}", besov_pairing_disk(&z2, &kw, &params, 40, 80)?);

    for phi in [PowerSeries1D::from_real(&[0.0, 1.0]), PowerSeries1D::from_real(&[0.3, 0.5, -0.2])] {
        let a = kps_norm_disk(&phi, 0.25, 2.0, 1)?.value;
        let b = kps_norm_disk(&phi.mul(&phi), 0.25, 2.0, 1)?.value;
        println!("‖φ‖ = {a:.5}, ‖φ²‖ = {b:.5}, ‖φ²‖/‖φ‖² = {:.5}", b / (a * a));
    }
    Ok(())
}
