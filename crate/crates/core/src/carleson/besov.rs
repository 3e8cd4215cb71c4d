//! Besov–Sobolev quadratures on the disk.
//!
//! Area measure is normalized: `dA/π`, and `dν_α = (α+1)(1−|z|²)^α dA/π`
//! has total mass one. Writing `s = |z|²` turns `dA/π` into `ds dt/(2π)`, so
//! every radial integral is a Gauss–Jacobi rule in `s`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{grid_box_norm, CarlesonBox};
use crate::error::{Error, Result};
use crate::kernels::{radial_multiplier, PowerSeries1D, C64};
use crate::special::{gauss_jacobi_unit, gauss_legendre, Rule};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesovParams {
    pub sigma: f64,
    pub p: f64,
    pub alpha: f64,
    pub m: usize,
}

impl BesovParams {
    pub fn validate(&self) -> Result<()> {
        let Self { sigma, p, alpha, m } = *self;
        if !(sigma > 0.0) || !(p > 1.0 && p.is_finite()) || !(alpha > -1.0) {
            return Err(Error::InvalidParameter(format!(
                "need sigma > 0, 1 < p < inf, alpha > -1; got {sigma}, {p}, {alpha}"
            )));
        }
        if !(m as f64 + sigma > 1.0 / p) {
            return Err(Error::InvalidParameter(format!("m + sigma = {} must exceed 1/p", m as f64 + sigma)));
        }
        Ok(())
    }

    pub fn conjugate_exponent(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    /// `t = (2+α)/q − σ` for the exponent `q`.
    pub fn order(&self, q: f64) -> f64 {
        (2.0 + self.alpha) / q - self.sigma
    }
}

/// Tensor rule: Gauss–Jacobi in `s = |z|²` times the uniform angular rule.
#[derive(Debug, Clone)]
pub struct DiskQuadrature {
    pub s_rule: Rule,
    pub angles: usize,
}

impl DiskQuadrature {
    /// Rule for `∫ F (1−s)^β ds dt/(2π)`.
    pub fn new(beta: f64, radial: usize, angles: usize) -> Result<Self> {
        if angles == 0 {
            return Err(Error::InvalidParameter("need at least one angle".into()));
        }
        Ok(Self { s_rule: gauss_jacobi_unit(radial, beta)?, angles })
    }

    fn angle(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.angles as f64
    }

    /// `Σ_i w_i · mean_j F(√s_i e^{it_j})`.
    pub fn integrate(&self, f: impl Fn(C64) -> f64 + Sync) -> f64 {
        let rows: Vec<f64> = self
            .s_rule
            .nodes
            .par_iter()
            .zip(&self.s_rule.weights)
            .map(|(&s, &w)| {
                let r = s.sqrt();
                w * (0..self.angles).map(|j| f(C64::from_polar(r, self.angle(j)))).sum::<f64>() / self.angles as f64
            })
            .collect();
        rows.iter().sum()
    }

    pub fn integrate_complex(&self, f: impl Fn(C64) -> C64 + Sync) -> C64 {
        let rows: Vec<C64> = self
            .s_rule
            .nodes
            .par_iter()
            .zip(&self.s_rule.weights)
            .map(|(&s, &w)| {
                let r = s.sqrt();
                (0..self.angles).map(|j| f(C64::from_polar(r, self.angle(j)))).sum::<C64>() * (w / self.angles as f64)
            })
            .collect();
        rows.iter().sum()
    }
}

/// `‖(1−|z|²)^{m+σ} f^{(m)}‖_{L^p(dλ₁)}` with `dλ₁ = (1−|z|²)^{−2} dA/π`.
pub fn besov_seminorm_disk(f: &PowerSeries1D, params: &BesovParams, radial: usize, angles: usize) -> Result<f64> {
    params.validate()?;
    let d = f.derivative(params.m);
    if d.coeffs.iter().all(|c| c.norm() == 0.0) {
        return Ok(0.0);
    }
    let beta = params.p * (params.m as f64 + params.sigma) - 2.0;
    let q = DiskQuadrature::new(beta, radial, angles)?;
    Ok(q.integrate(|z| d.eval(z).norm().powf(params.p)).powf(1.0 / params.p))
}

/// Taylor terms `Σ_{j<m} |f^{(j)}(0)|` plus the order-`m` seminorm.
pub fn besov_norm_m(f: &PowerSeries1D, params: &BesovParams, radial: usize, angles: usize) -> Result<f64> {
    let mut taylor = 0.0;
    let mut factorial = 1.0;
    for j in 0..params.m {
        if j > 0 {
            factorial *= j as f64;
        }
        taylor += f.coeffs.get(j).map_or(0.0, |c| c.norm() * factorial);
    }
    Ok(taylor + besov_seminorm_disk(f, params, radial, angles)?)
}

/// `R_t = R^{α−t, t}` applied to a series.
fn radial_image(f: &PowerSeries1D, alpha: f64, t: f64) -> Result<PowerSeries1D> {
    let coeffs = f
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| Ok(c * radial_multiplier(alpha - t, t, 1, k)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(PowerSeries1D::new(coeffs))
}

/// `⟨f, g⟩ = ∫ R_{t_p} f · conj(R_{t_p'} g) dν_α` by quadrature.
pub fn besov_pairing_disk(
    f: &PowerSeries1D,
    g: &PowerSeries1D,
    params: &BesovParams,
    radial: usize,
    angles: usize,
) -> Result<C64> {
    params.validate()?;
    let rf = radial_image(f, params.alpha, params.order(params.p))?;
    let rg = radial_image(g, params.alpha, params.order(params.conjugate_exponent()))?;
    let q = DiskQuadrature::new(params.alpha, radial, angles)?;
    Ok(q.integrate_complex(|z| rf.eval(z) * rg.eval(z).conj()) * (params.alpha + 1.0))
}

/// `‖R_{t_q} f‖_{L^q(ν_α)}` with `t_q = (2+α)/q − σ`; the pairing obeys
/// `|⟨f, g⟩| ≤ N_p(f) N_{p'}(g)` on the same nodes.
pub fn besov_lp_norm_disk(
    f: &PowerSeries1D,
    sigma: f64,
    alpha: f64,
    q: f64,
    radial: usize,
    angles: usize,
) -> Result<f64> {
    let params = BesovParams { sigma, p: q, alpha, m: 1 };
    let rf = radial_image(f, alpha, params.order(q))?;
    let quad = DiskQuadrature::new(alpha, radial, angles)?;
    Ok((quad.integrate(|z| rf.eval(z).norm().powf(q)) * (alpha + 1.0)).powf(1.0 / q))
}

/// `|(1−|z|²)^{m+σ} φ^{(m)}|^p dλ₁` lumped onto a tensor polar grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarMeasure {
    pub radii: Vec<f64>,
    pub angles: usize,
    pub mass: Vec<Vec<f64>>,
}

pub fn polar_measure(phi: &PowerSeries1D, sigma: f64, p: f64, m: usize, radial: usize, angles: usize) -> PolarMeasure {
    let rule = gauss_legendre(radial).mapped(0.0, 1.0);
    let d = phi.derivative(m);
    let dt = 2.0 * PI / angles as f64;
    let mass = rule
        .nodes
        .par_iter()
        .zip(&rule.weights)
        .map(|(&r, &w)| {
            let rho = 1.0 - r * r;
            let density = rho.powf(p * (m as f64 + sigma) - 2.0) * w * r * dt / PI;
            (0..angles).map(|j| d.eval(C64::from_polar(r, j as f64 * dt)).norm().powf(p) * density).collect()
        })
        .collect();
    PolarMeasure { radii: rule.nodes, angles, mass }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KpsReport {
    pub value: f64,
    pub sup_norm: f64,
    pub carleson: f64,
    pub attained_at: Option<CarlesonBox>,
}

pub const KPS_RADIAL: usize = 256;
pub const KPS_ANGLES: usize = 512;

/// `‖φ‖_∞ + ‖ |(1−|z|²)^{m+σ} φ^{(m)}|^p dλ₁ ‖_{WCM}` on the default mesh.
pub fn kps_norm_disk(phi: &PowerSeries1D, sigma: f64, p: f64, m: usize) -> Result<KpsReport> {
    kps_norm_disk_with(phi, sigma, p, m, KPS_RADIAL, KPS_ANGLES)
}

pub fn kps_norm_disk_with(
    phi: &PowerSeries1D,
    sigma: f64,
    p: f64,
    m: usize,
    radial: usize,
    angles: usize,
) -> Result<KpsReport> {
    BesovParams { sigma, p, alpha: 0.0, m }.validate()?;
    // maximum modulus: the sup over the closed disk sits on the circle
    let sup_norm = (0..2 * angles)
        .into_par_iter()
        .map(|j| phi.eval(C64::from_polar(1.0, PI * j as f64 / angles as f64)).norm())
        .reduce(|| 0.0, f64::max);
    let mu = polar_measure(phi, sigma, p, m, radial, angles);
    let b = grid_box_norm(&mu.radii, mu.angles, &mu.mass, sigma, p)?;
    Ok(KpsReport { value: sup_norm + b.value, sup_norm, carleson: b.value, attained_at: b.attained_at })
}
