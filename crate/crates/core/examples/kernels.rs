//! Evaluate every built-in kernel at a pair of points, with the normalized
//! kernel and the induced distance, then print the first Besov–Sobolev
//! kernel coefficients.

use coronakit::kernels::{besov_kernel_coeffs, ComplexPoint, Kernel, KernelSpec};
use coronakit::C64;

fn main() -> coronakit::Result<()> {
    let specs = [
        KernelSpec::szego_disk(),
        KernelSpec::hardy_ball(2),
        KernelSpec::bergman_ball(2),
        KernelSpec::hardy_polydisc(2),
        KernelSpec::bergman_polydisc(2),
        KernelSpec::besov_sobolev_disk(0.5, 2.0, 0.0, 256),
    ];
    for spec in specs {
        let k = Kernel::new(spec)?;
        let n = k.domain().dim;
        let x = ComplexPoint::new(vec![C64::new(0.4, 0.1); n]);
        let y = ComplexPoint::new(vec![C64::new(-0.2, 0.3); n]);
        println!(
            "{:<18} n={n}  k(x,y) = {:.6}  k~_x(y) = {:.6}  d(x,y) = {:.6}",
            format!("{:?}", spec.family),
            k.eval(&x, &y)?,
            k.normalized(&x, &y)?,
            k.distance(&x, &y)?
        );
    }
    let c = besov_kernel_coeffs(0.5, 0.0, 2.0, 8)?;
    let head: Vec<String> = c.coeffs.iter().map(|v| format!("{:.6}", v.re)).collect();
    println!("besov-sobolev (sigma=1/2, p=2) coefficients: {}", head.join(", "));
    Ok(())
}
