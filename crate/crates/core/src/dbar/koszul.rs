//! Koszul correction on the disk. With `S = Σ|φ_k|²` and `ψ_j = φ̄_j/S`,
//! solve `∂̄b_{jk} = ψ_j ∂̄ψ_k − ψ_k ∂̄ψ_j` for `j < k`, set `b_{kj} = −b_{jk}`,
//! and take `f_j = ψ_j + Σ_k b_{jk} φ_k`. Then `∂̄f_j = 0` and `Σ φ_j f_j = 1`.

use std::f64::consts::PI;

use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::{fd_dbar, square_grid, CauchyPompeiu};
use crate::carleson::{kps_norm_disk_with, KpsReport};
use crate::error::{Error, Result};
use crate::kernels::{PowerSeries1D, C64};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KoszulOptions {
    /// Gauss–Legendre nodes per radial segment of the Cauchy–Pompeiu solve.
    pub radial: usize,
    /// Angular FFT size of the Cauchy–Pompeiu solve.
    pub angles: usize,
    /// Boundary samples used to build the series approximants.
    pub boundary_nodes: usize,
    pub grid_step: f64,
    pub grid_radius: f64,
    pub fd_step: f64,
    pub residual_tol: f64,
    pub dbar_tol: f64,
    /// Maximum allowed change of a correction when the solver mesh is refined.
    pub solve_tol: f64,
    pub kps_sigma: f64,
    pub kps_p: f64,
    pub kps_m: usize,
    pub kps_radial: usize,
    pub kps_angles: usize,
    /// Return `e_j/φ_j` when some `|φ_j| ≥ c/2` on the whole grid.
    pub allow_shortcut: bool,
}

impl Default for KoszulOptions {
    fn default() -> Self {
        Self {
            radial: 40,
            angles: 128,
            boundary_nodes: 256,
            grid_step: 0.05,
            grid_radius: 0.95,
            fd_step: 1e-4,
            residual_tol: 1e-4,
            dbar_tol: 1e-6,
            solve_tol: 1e-8,
            kps_sigma: 0.25,
            kps_p: 2.0,
            kps_m: 1,
            kps_radial: 128,
            kps_angles: 256,
            allow_shortcut: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KoszulReport {
    /// Analytic approximants of the `f_j`.
    pub f: Vec<PowerSeries1D>,
    pub c: f64,
    pub c_certified: f64,
    /// Index `j` when the answer is `e_j/φ_j`.
    pub shortcut: Option<usize>,
    /// `sup |Σ φ_j f_j − 1|` over the grid, using the approximants.
    pub residual: f64,
    /// Largest finite-difference `|∂̄f_j|` at interior grid points.
    pub dbar_residual: f64,
    /// Largest `|b_{jk} + b_{kj}|` with both solved independently.
    pub antisymmetry_error: f64,
    /// Change of the corrections under mesh refinement at probe points.
    pub solve_delta: f64,
    /// `(Σ_{k<0} |f̂_k|²)^{1/2}` of the boundary samples of each `f_j`.
    pub negative_frequency_energy: Vec<f64>,
    pub sup_f: Vec<f64>,
    pub kps_norms: Vec<KpsReport>,
    pub options: KoszulOptions,
    pub within_tolerance: bool,
}

/// `min (Σ|φ_j|²)^{1/2}` over the square grid and `4·boundary_nodes`
/// points of the circle.
pub fn certify_lower_bound(phi: &[PowerSeries1D], step: f64, radius: f64, boundary_nodes: usize) -> f64 {
    verification_points(step, radius, 4 * boundary_nodes)
        .par_iter()
        .map(|&z| phi.iter().map(|p| p.eval(z).norm_sqr()).sum::<f64>().sqrt())
        .reduce(|| f64::INFINITY, f64::min)
}

fn verification_points(step: f64, radius: f64, boundary: usize) -> Vec<C64> {
    let mut pts = square_grid(step, radius.min(1.0));
    pts.extend((0..boundary).map(|j| C64::from_polar(1.0, 2.0 * PI * j as f64 / boundary as f64)));
    pts
}

struct Local {
    phi: Vec<C64>,
    psi: Vec<C64>,
    dbar_psi: Vec<C64>,
}

fn local(phi: &[PowerSeries1D], dphi: &[PowerSeries1D], z: C64) -> Local {
    let v: Vec<C64> = phi.iter().map(|p| p.eval(z)).collect();
    let dv: Vec<C64> = dphi.iter().map(|p| p.eval(z)).collect();
    let s: f64 = v.iter().map(|x| x.norm_sqr()).sum();
    let ds: C64 = v.iter().zip(&dv).map(|(x, d)| x * d.conj()).sum();
    let psi = v.iter().map(|x| x.conj() / s).collect();
    let dbar_psi = v.iter().zip(&dv).map(|(x, d)| d.conj() / s - x.conj() * ds / (s * s)).collect();
    Local { phi: v, psi, dbar_psi }
}

struct Corona<'a> {
    phi: &'a [PowerSeries1D],
    dphi: Vec<PowerSeries1D>,
    cp: CauchyPompeiu,
}

impl Corona<'_> {
    fn rhs(&self, j: usize, k: usize, z: C64) -> C64 {
        let l = local(self.phi, &self.dphi, z);
        l.psi[j] * l.dbar_psi[k] - l.psi[k] * l.dbar_psi[j]
    }

    fn b(&self, j: usize, k: usize, z: C64) -> Result<C64> {
        self.b_with(&self.cp, j, k, z)
    }

    fn b_with(&self, cp: &CauchyPompeiu, j: usize, k: usize, z: C64) -> Result<C64> {
        cp.solve_fn(|w| self.rhs(j, k, w), z)
    }

    /// All `f_j(z)` from one round of `N(N−1)/2` solves.
    fn f(&self, z: C64) -> Result<Vec<C64>> {
        let n = self.phi.len();
        let l = local(self.phi, &self.dphi, z);
        let mut out = l.psi.clone();
        for j in 0..n {
            for k in j + 1..n {
                let b = self.b(j, k, z)?;
                out[j] += b * l.phi[k];
                out[k] -= b * l.phi[j];
            }
        }
        Ok(out)
    }
}

fn series_from_boundary(samples: &[C64]) -> (PowerSeries1D, f64) {
    let n = samples.len();
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let coeffs: Vec<C64> = buf.iter().map(|v| v / n as f64).collect();
    let neg = coeffs[n / 2 + 1..].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    (PowerSeries1D::new(coeffs[..n / 2].to_vec()), neg)
}

fn boundary_nodes(n: usize) -> Vec<C64> {
    (0..n).map(|j| C64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64)).collect()
}

/// Analytic Bezout solutions `Σ φ_j f_j = 1` on the disk, given the lower
/// bound `Σ|φ_j|² ≥ c²`. The bound is checked on the verification grid.
pub fn koszul_corona_disk(phi: &[PowerSeries1D], c: f64, opts: &KoszulOptions) -> Result<KoszulReport> {
    if phi.is_empty() {
        return Err(Error::InvalidParameter("need at least one function".into()));
    }
    if !(c > 0.0) {
        return Err(Error::InvalidParameter(format!("lower bound must be positive, got {c}")));
    }
    if opts.boundary_nodes < 8 || !opts.boundary_nodes.is_power_of_two() {
        return Err(Error::InvalidParameter("boundary_nodes must be a power of two >= 8".into()));
    }
    let c_certified = certify_lower_bound(phi, opts.grid_step, 1.0, opts.boundary_nodes);
    if c > c_certified {
        return Err(Error::Infeasible(format!(
            "lower bound {c} fails on the grid: min (sum |phi_j|^2)^(1/2) = {c_certified}"
        )));
    }
    let n = phi.len();
    let nodes = boundary_nodes(opts.boundary_nodes);
    let grid = square_grid(opts.grid_step, opts.grid_radius);

    let shortcut = if opts.allow_shortcut {
        let pts = verification_points(opts.grid_step, 1.0, 4 * opts.boundary_nodes);
        (0..n).find(|&j| pts.iter().all(|&z| phi[j].eval(z).norm() >= 0.5 * c))
    } else {
        None
    };

    let corona = Corona {
        phi,
        dphi: phi.iter().map(|p| p.derivative(1)).collect(),
        cp: CauchyPompeiu::new(opts.radial, opts.angles)?,
    };

    let (boundary, dbar_residual, antisymmetry_error, solve_delta) = match shortcut {
        Some(j) => {
            let vals = nodes
                .iter()
                .map(|&z| {
                    let mut v = vec![C64::new(0.0, 0.0); n];
                    v[j] = 1.0 / phi[j].eval(z);
                    v
                })
                .collect::<Vec<_>>();
            (vals, 0.0, 0.0, 0.0)
        }
        None => {
            let vals = nodes.par_iter().map(|&z| corona.f(z)).collect::<Result<Vec<_>>>()?;
            let h = opts.fd_step;
            let fd_grid: Vec<C64> = grid.iter().copied().filter(|z| z.norm() + 2.0 * h < 1.0).collect();
            let dbar_residual = fd_grid
                .par_iter()
                .map(|&z| -> Result<f64> {
                    let mut worst: f64 = 0.0;
                    for j in 0..n {
                        let d = fd_dbar(|w| corona.f(w).map(|v| v[j]).unwrap_or(C64::new(f64::NAN, 0.0)), z, h);
                        worst = worst.max(d.norm());
                    }
                    Ok(worst)
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            let probes = [C64::new(0.0, 0.0), C64::new(0.5, 0.3), C64::new(-0.7, -0.2), C64::from_polar(1.0, 1.0)];
            let fine = CauchyPompeiu::new(opts.radial + opts.radial / 2, 2 * opts.angles)?;
            let mut anti: f64 = 0.0;
            let mut delta: f64 = 0.0;
            for &z in &probes {
                for j in 0..n {
                    for k in j + 1..n {
                        let bjk = corona.b(j, k, z)?;
                        let bkj = corona.b(k, j, z)?;
                        anti = anti.max((bjk + bkj).norm());
                        delta = delta.max((corona.b_with(&fine, j, k, z)? - bjk).norm());
                    }
                }
            }
            (vals, dbar_residual, anti, delta)
        }
    };
    if !(solve_delta <= opts.solve_tol) {
        return Err(Error::Numerical(format!(
            "correction solve has not converged: refinement changes it by {solve_delta:e}"
        )));
    }

    let mut f = Vec::with_capacity(n);
    let mut negative_frequency_energy = Vec::with_capacity(n);
    let mut sup_f = Vec::with_capacity(n);
    for j in 0..n {
        let samples: Vec<C64> = boundary.iter().map(|v| v[j]).collect();
        sup_f.push(samples.iter().map(|v| v.norm()).fold(0.0, f64::max));
        let (s, e) = series_from_boundary(&samples);
        f.push(s);
        negative_frequency_energy.push(e);
    }
    let residual = grid
        .par_iter()
        .map(|&z| {
            let s: C64 = phi.iter().zip(&f).map(|(p, g)| p.eval(z) * g.eval(z)).sum();
            (s - 1.0).norm()
        })
        .reduce(|| 0.0, f64::max);
    let kps_norms = f
        .iter()
        .map(|g| kps_norm_disk_with(g, opts.kps_sigma, opts.kps_p, opts.kps_m, opts.kps_radial, opts.kps_angles))
        .collect::<Result<Vec<_>>>()?;
    let within_tolerance = residual <= opts.residual_tol
        && dbar_residual <= opts.dbar_tol
        && kps_norms.iter().all(|k| k.value.is_finite());
    Ok(KoszulReport {
        f,
        c,
        c_certified,
        shortcut,
        residual,
        dbar_residual,
        antisymmetry_error,
        solve_delta,
        negative_frequency_energy,
        sup_f,
        kps_norms,
        options: *opts,
        within_tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn unit_first_entry_takes_shortcut() {
        let phi = [PowerSeries1D::constant(c(1.0, 0.0)), PowerSeries1D::monomial(1, c(1.0, 0.0))];
        let r = koszul_corona_disk(&phi, 0.5, &KoszulOptions::default()).unwrap();
        assert_eq!(r.shortcut, Some(0));
        assert!((r.f[0].coeffs[0] - 1.0).norm() < 1e-14);
        assert!(r.f[1].sup_abs_coeff() < 1e-14);
    }

    #[test]
    fn too_large_bound_is_rejected() {
        let phi = [PowerSeries1D::monomial(1, c(1.0, 0.0))];
        assert!(matches!(koszul_corona_disk(&phi, 0.1, &KoszulOptions::default()), Err(Error::Infeasible(_))));
    }

    #[test]
    fn two_functions_end_to_end() {
        let phi = [PowerSeries1D::monomial(2, c(1.0, 0.0)), PowerSeries1D::from_real(&[1.0, -1.0])];
        let cc = certify_lower_bound(&phi, 0.05, 1.0, 256);
        let opts = KoszulOptions { allow_shortcut: false, ..KoszulOptions::default() };
        let r = koszul_corona_disk(&phi, cc, &opts).unwrap();
        assert!(r.residual < 1e-4, "{}", r.residual);
        assert!(r.dbar_residual < 1e-6, "{}", r.dbar_residual);
        assert!(r.antisymmetry_error < 1e-12);
        assert!(r.sup_f.iter().all(|s| s.is_finite()));
        assert!(r.within_tolerance);
    }
}
