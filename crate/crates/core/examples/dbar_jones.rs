//! Solve ∂̄u = μ for a few point masses with the Jones kernel, compare with
//! the Cauchy–Pompeiu solution, and compute circle Sobolev norms.

use coronakit::carleson::DiscreteMeasure;
use coronakit::dbar::{
    boundary_sobolev_norm, cauchy_pompeiu_measure, fd_dbar, h2_carleson_norm, jones_solve, square_grid, CauchyPompeiu,
};
use coronakit::C64;

fn main() -> coronakit::Result<()> {
    let cp = CauchyPompeiu::new(24, 32)?;
    let z = C64::new(0.3, -0.4);
    println!("Cauchy–Pompeiu of g ≡ 1 at {z}: {:.15} (z̄ = {})", cp.solve_fn(|_| C64::new(1.0, 0.0), z)?, z.conj());

    let mu = DiscreteMeasure::disk(
        &[C64::new(0.33, 0.41), C64::new(-0.52, 0.13), C64::new(0.07, -0.77)],
        vec![0.4, 0.25, 0.1],
    )?;
    let boundary: Vec<C64> = (0..512).map(|j| C64::from_polar(1.0, j as f64 * std::f64::consts::PI / 256.0)).collect();
    let u = jones_solve(&mu, &boundary)?;
    let h2 = h2_carleson_norm(&mu)?;
    println!("H²-Carleson norm {h2:.6}, boundary sup |u| {:.6}", u.sup_norm());

    let diff = |z: C64| {
        let u = jones_solve(&mu, &[z]).unwrap().channel(0)[0];
        u - C64::new(0.0, 2.0) * cauchy_pompeiu_measure(&mu, z).unwrap()
    };
    let worst = square_grid(0.05, 0.9).into_iter().map(|z| fd_dbar(diff, z, 1e-4).norm()).fold(0.0, f64::max);
    println!("max FD |∂̄(u − 2i·u₀)| on the 0.05 grid: {worst:.2e}");

    for (name, f) in [
        ("e^{it}", Box::new(|t: f64| C64::from_polar(1.0, t)) as Box<dyn Fn(f64) -> C64>),
        ("|sin t|^0.8", Box::new(|t: f64| C64::new(t.sin().abs().powf(0.8), 0.0))),
    ] {
        let samples: Vec<C64> = (0..512).map(|j| f(j as f64 * std::f64::consts::PI / 256.0)).collect();
        let r = boundary_sobolev_norm(&samples, 0.3, 2.0)?;
        println!(
            "{name:<12} difference form {:.6}, gradient form {:.6}, ratio {:.4}",
            r.difference_form, r.gradient_form, r.ratio
        );
    }
    Ok(())
}
