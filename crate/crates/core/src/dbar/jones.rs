use std::f64::consts::PI;

use rayon::prelude::*;

use crate::carleson::{box_norm, DiscreteMeasure};
use crate::error::{Error, Result};
use crate::kernels::C64;
use crate::rkhs::SampleFunction;

/// Box norm with `σ = 1/2, p = 2`: `sup_Q (μ(S(Q)) / |Q|)^{1/2}`.
pub fn h2_carleson_norm(mu: &DiscreteMeasure) -> Result<f64> {
    Ok(box_norm(mu, 0.5, 2.0, 1)?.value)
}

/// Data measure `μ` and its normalization `ν = μ / h2_carleson_norm(μ)²`,
/// so that `sup_Q ν(S(Q))/|Q| = 1`.
#[derive(Debug, Clone)]
pub struct JonesData {
    pub mu: DiscreteMeasure,
    pub nu: DiscreteMeasure,
    pub h2_norm: f64,
    support: Vec<C64>,
}

impl JonesData {
    pub fn new(mu: DiscreteMeasure) -> Result<Self> {
        mu.validate()?;
        let h2_norm = h2_carleson_norm(&mu)?;
        if h2_norm == 0.0 {
            return Err(Error::InvalidParameter("cannot normalize the zero measure".into()));
        }
        let support: Vec<C64> = mu.points.points.iter().map(|p| p.z()).collect();
        if let Some(z) = support.iter().find(|z| !(z.norm() < 1.0)) {
            return Err(Error::Domain(format!("support point {z} is not interior")));
        }
        let nu = mu.scaled(1.0 / (h2_norm * h2_norm));
        Ok(Self { mu, nu, h2_norm, support })
    }

    pub fn support(&self) -> &[C64] {
        &self.support
    }

    /// Exponent `∬_{|ω|≥|ζ|} [−(1+ω̄z)/(1−ω̄z) + (1+ω̄ζ)/(1−ω̄ζ)] dν(ω)`.
    fn exponent(&self, z: C64, zeta: C64) -> C64 {
        let r = zeta.norm();
        let mut acc = C64::new(0.0, 0.0);
        for (w, &nu) in self.support.iter().zip(&self.nu.weights) {
            if nu == 0.0 || w.norm() < r {
                continue;
            }
            let a = w.conj() * z;
            let b = w.conj() * zeta;
            acc += nu * (-(1.0 + a) / (1.0 - a) + (1.0 + b) / (1.0 - b));
        }
        acc
    }
}

fn check_separated(z: C64, zeta: C64) -> Result<()> {
    if (z - zeta).norm() <= 1e-14 {
        return Err(Error::Domain(format!("kernel is singular at z = zeta = {zeta}")));
    }
    Ok(())
}

/// `K(ν, z, ζ) = (2i/π)(1−|ζ|²)/((z−ζ)(1−ζ̄z)) · exp{…}`, holomorphic in `z`
/// off `ζ` with residue `2i/π` there.
pub fn jones_kernel(data: &JonesData, z: C64, zeta: C64) -> Result<C64> {
    if !(z.norm() <= 1.0) || !(zeta.norm() < 1.0) {
        return Err(Error::Domain(format!("need |z| <= 1 and |zeta| < 1, got {z}, {zeta}")));
    }
    check_separated(z, zeta)?;
    let front = C64::new(0.0, 2.0 / PI) * (1.0 - zeta.norm_sqr()) / ((z - zeta) * (1.0 - zeta.conj() * z));
    Ok(front * data.exponent(z, zeta).exp())
}

/// Upper bound for the modulus of the exponential factor at `ζ`: the first
/// Herglotz term has nonpositive real part, the second is at most
/// `(1+|ωζ|)/(1−|ωζ|)`.
pub fn jones_modulus_bound(data: &JonesData, zeta: C64) -> f64 {
    let r = zeta.norm();
    let c: f64 = data
        .support
        .iter()
        .zip(&data.nu.weights)
        .filter(|(w, _)| w.norm() >= r)
        .map(|(w, nu)| {
            let s = w.norm() * r;
            nu * (1.0 + s) / (1.0 - s)
        })
        .sum();
    c.exp()
}

/// `u(z) = ∬ K(ν, z, ζ) dμ(ζ)` at each evaluation point. Zero data gives
/// `u ≡ 0` without normalization.
pub fn jones_solve(mu: &DiscreteMeasure, eval_points: &[C64]) -> Result<SampleFunction> {
    if mu.is_empty() {
        mu.validate()?;
        return Ok(SampleFunction::scalar(vec![C64::new(0.0, 0.0); eval_points.len()]));
    }
    let data = JonesData::new(mu.clone())?;
    jones_solve_data(&data, eval_points)
}

pub(crate) fn jones_solve_data(data: &JonesData, eval_points: &[C64]) -> Result<SampleFunction> {
    let values = eval_points
        .par_iter()
        .map(|&z| {
            let mut u = C64::new(0.0, 0.0);
            for (&zeta, &w) in data.support.iter().zip(&data.mu.weights) {
                if w != 0.0 {
                    u += w * jones_kernel(data, z, zeta)?;
                }
            }
            Ok(u)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SampleFunction::scalar(values))
}

/// `u₀(z) = (1/π) Σ μ_i / (z − ζ_i)`, the Cauchy–Pompeiu solution for point
/// masses.
pub fn cauchy_pompeiu_measure(mu: &DiscreteMeasure, z: C64) -> Result<C64> {
    let mut u = C64::new(0.0, 0.0);
    for (p, &w) in mu.points.points.iter().zip(&mu.weights) {
        if w == 0.0 {
            continue;
        }
        let zeta = p.z();
        check_separated(z, zeta)?;
        u += w / (z - zeta);
    }
    Ok(u / PI)
}
