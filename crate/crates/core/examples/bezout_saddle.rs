//! Convex-shifted Bezout solves on a Szegő sample and the minimax over the
//! simplex, with its LP certificate and a lattice scan for comparison.

use coronakit::convex_poisson::{grid_scan, saddle_value, BezoutSolver, SaddleOptions};
use coronakit::kernels::{ComplexPoint, KernelSpec, PointSet};
use coronakit::rkhs::{build_gram, SampleFunction};
use coronakit::C64;

fn main() -> coronakit::Result<()> {
    let zs: Vec<C64> = (0..12).map(|j| C64::from_polar(0.8 * ((j + 1) as f64 / 12.0).sqrt(), 2.1 * j as f64)).collect();
    let pts = PointSet::disk(zs.iter().copied())?;
    let g = build_gram(&KernelSpec::szego_disk(), &pts)?;
    let phi = SampleFunction::vector(vec![zs.iter().map(|z| z * z).collect(), zs.iter().map(|z| 1.0 - z).collect()]);
    let one = SampleFunction::constant(zs.len(), C64::new(1.0, 0.0));
    let base = vec![ComplexPoint::scalar(zs[3]), ComplexPoint::scalar(C64::new(-0.4, 0.3))];
    let solver = BezoutSolver::new(&g, &phi, &one, &base, 0.1)?;

    for theta in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.2, 0.3, 0.5]] {
        let s = solver.solve(&theta)?;
        println!("θ = {theta:?}: ‖g‖ = {:.8}, residual = {:.1e}", s.norm, s.residual);
    }
    let r = saddle_value(&solver, &base, &SaddleOptions::default())?;
    println!(
        "saddle value {:.12} at θ = {:?}\n  LP bound {:.12}, inf-sup bound {:.12}, converged = {}",
        r.value, r.theta_star.theta, r.lp_upper, r.minimax_upper, r.converged
    );
    let (v, theta) = grid_scan(&solver, 64)?;
    println!("lattice scan (1/64): {v:.12} at {theta:?}, below the saddle by {:.2e}", r.value - v);
    Ok(())
}
