//! Norms on a finite sample of the Szegő space: interpolation, shifted
//! norms and the identity ‖f‖_{H^a} = ‖k̃_a f‖_H, multiplier norms and the
//! kernel-multiplier lower bound.

use coronakit::kernels::{ComplexPoint, KernelSpec, PointSet};
use coronakit::rkhs::{
    build_gram, kernel_multiplier_norm_lower, min_norm_interpolation, restricted_multiplier_norm,
    restricted_vector_norms, shifted_norm, SampleFunction,
};
use coronakit::C64;

fn main() -> coronakit::Result<()> {
    let zs: Vec<C64> = (0..10).map(|j| C64::from_polar(0.85 * j as f64 / 10.0, 2.3 * j as f64)).collect();
    let pts = PointSet::disk(zs.iter().copied())?;
    let g = build_gram(&KernelSpec::szego_disk(), &pts)?;
    println!("Gram spectrum: [{:.3e}, {:.3e}]", g.min_eig, g.max_eig);

    let f = SampleFunction::from_fn(&pts, |p| (p.z() * 0.7).exp());
    let a = ComplexPoint::scalar(C64::new(0.5, -0.2));
    let shifted = shifted_norm(&g, &a, &f)?;
    let kt = g.normalized_kernel_values(&a)?;
    let direct = min_norm_interpolation(&g, &f.times(&kt))?;
    println!("‖f‖_H^a = {:.12}, ‖k~_a f‖_H = {:.12}", shifted.value, direct.value);

    let z = SampleFunction::from_fn(&pts, |p| p.z());
    println!("multiplier norm of z: {:.12}", restricted_multiplier_norm(&g, &z)?.value);

    let pair =
        SampleFunction::vector(vec![zs.iter().map(|z| z * z).collect(), zs.iter().map(|z| (1.0 - z) * 0.5).collect()]);
    let v = restricted_vector_norms(&g, &pair)?;
    println!("(z², (1-z)/2): row {:.6}, column {:.6}, max {:.6}", v.row, v.column, v.max);

    let probes: Vec<ComplexPoint> = pts.points.clone();
    let lower = kernel_multiplier_norm_lower(&g, &pair, &probes)?;
    println!("kernel-multiplier lower bound: {:.6} (≤ column norm)", lower.value);
    Ok(())
}
