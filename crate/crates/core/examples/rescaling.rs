//! Forge a rescaling of a Szegő Gram matrix, recover ψ up to a global
//! phase, then show that a small perturbation of one modulus is caught.

use coronakit::kernels::{KernelSpec, PointSet};
use coronakit::rescaling::{apply_rescaling, check_rescaling};
use coronakit::rkhs::build_gram;
use coronakit::C64;

fn main() -> coronakit::Result<()> {
    let pts = PointSet::disk((0..7).map(|j| C64::from_polar(0.1 + 0.12 * j as f64, 1.7 * j as f64)))?;
    let k = build_gram(&KernelSpec::szego_disk(), &pts)?.entries;
    let psi: Vec<C64> = (0..7).map(|j| C64::from_polar(1.0 + 0.3 * j as f64, 0.9 * j as f64)).collect();
    let big = apply_rescaling(&k, &psi)?;

    let check = check_rescaling(&big, &k, 1e-8)?;
    let w = check.witness.expect("forged rescaling is accepted");
    let phase = psi[0] / w.psi[0];
    let err = w.psi.iter().zip(&psi).map(|(r, p)| (r * phase - p).norm()).fold(0.0, f64::max);
    println!("accepted: {}, max |ψ recovered − ψ| after phase fix = {err:.2e}", check.is_rescaling);

    let mut bad = big.clone();
    bad[(2, 5)] *= 1.001;
    bad[(5, 2)] = bad[(2, 5)].conj();
    let check = check_rescaling(&bad, &k, 1e-8)?;
    println!("perturbed: accepted = {}, violation = {:?}", check.is_rescaling, check.violation);
    Ok(())
}
