//! Koszul corona solve for φ = (z², 1 − z): analytic f with z²f₁ + (1−z)f₂ = 1.

use coronakit::dbar::{certify_lower_bound, koszul_corona_disk, KoszulOptions};
use coronakit::kernels::PowerSeries1D;

fn main() -> coronakit::Result<()> {
    let phi = [PowerSeries1D::from_real(&[0.0, 0.0, 1.0]), PowerSeries1D::from_real(&[1.0, -1.0])];
    let c = certify_lower_bound(&phi, 0.05, 1.0, 256);
    let opts = KoszulOptions { allow_shortcut: false, ..KoszulOptions::default() };
    let r = koszul_corona_disk(&phi, c, &opts)?;
    println!("certified c = {:.6}", r.c_certified);
    println!("Bezout residual on the 0.05 grid: {:.2e}", r.residual);
    println!("FD ∂̄ residual: {:.2e}, antisymmetry error: {:.1e}", r.dbar_residual, r.antisymmetry_error);
    for (j, (s, k)) in r.sup_f.iter().zip(&r.kps_norms).enumerate() {
        println!(
            "f_{}: sup {s:.6}, K_p^σ norm {:.6}, negative-frequency energy {:.1e}",
            j + 1,
            k.value,
            r.negative_frequency_energy[j]
        );
    }
    let head: Vec<String> = r.f[1].coeffs.iter().take(5).map(|c| format!("{:.5}", c)).collect();
    println!("f_2 leading coefficients: {}", head.join(", "));
    Ok(())
}
