//! Outer functions on the disk with prescribed boundary modulus
//! `|F(e^{it})|² = w(t) = θ₀ + Σ θ_m |k̃_{a_m}(e^{it})|²`.
//!
//! `log F` is the analytic completion of `½ ln w`: Fourier coefficient
//! `ĉ_0` at frequency zero and `2ĉ_k` for `k ≥ 1`, so `Re log F = ½ ln w` on
//! the circle and `F(0) > 0`.

use std::f64::consts::PI;

use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::convex_poisson::ShiftConfig;
use crate::error::{Error, Result};
use crate::kernels::{DomainSpec, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OuterFunction {
    /// Taylor coefficients of `log F`, degrees `0..nodes/2`.
    pub log_coeffs: Vec<C64>,
    pub nodes: usize,
    /// Boundary weight `w(t_j)` at `t_j = 2πj/nodes`.
    pub weight: Vec<f64>,
}

/// `|k̃_a(e^{it})|² = (1 − |a|²)/|1 − ā e^{it}|²` on the disk.
fn boundary_kernel_sq(a: C64, t: f64) -> f64 {
    (1.0 - a.norm_sqr()) / (C64::new(1.0, 0.0) - a.conj() * C64::from_polar(1.0, t)).norm_sqr()
}

pub fn boundary_weight(shift: &ShiftConfig, t: f64) -> f64 {
    shift.theta[0]
        + shift.base_points.iter().zip(&shift.theta[1..]).map(|(a, th)| th * boundary_kernel_sq(a.z(), t)).sum::<f64>()
}

pub fn construct_outer(shift: &ShiftConfig, nodes: usize) -> Result<OuterFunction> {
    shift.validate()?;
    for a in &shift.base_points {
        DomainSpec::disk().check(a)?;
    }
    if nodes < 256 || !nodes.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "outer construction needs a power-of-two node count >= 256, got {nodes}"
        )));
    }
    let weight: Vec<f64> = (0..nodes).map(|j| boundary_weight(shift, 2.0 * PI * j as f64 / nodes as f64)).collect();
    if let Some(j) = weight.iter().position(|&w| !(w > 0.0) || !w.is_finite()) {
        return Err(Error::InvalidParameter(format!("degenerate boundary weight at node {j}")));
    }
    let mut buf: Vec<C64> = weight.iter().map(|w| C64::new(0.5 * w.ln(), 0.0)).collect();
    FftPlanner::new().plan_fft_forward(nodes).process(&mut buf);
    let scale = 1.0 / nodes as f64;
    let log_coeffs = (0..nodes / 2).map(|k| buf[k] * if k == 0 { scale } else { 2.0 * scale }).collect();
    Ok(OuterFunction { log_coeffs, nodes, weight })
}

impl OuterFunction {
    pub fn log_eval(&self, z: C64) -> C64 {
        self.log_coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.log_eval(z).exp()
    }

    /// `F` at the boundary nodes.
    pub fn boundary_values(&self) -> Vec<C64> {
        let mut buf = vec![C64::new(0.0, 0.0); self.nodes];
        buf[..self.log_coeffs.len()].copy_from_slice(&self.log_coeffs);
        // inverse FFT without normalization is Σ_k b_k e^{ikt_j}
        FftPlanner::new().plan_fft_inverse(self.nodes).process(&mut buf);
        buf.into_iter().map(|v| v.exp()).collect()
    }

    /// `‖F‖_{H²}` by boundary quadrature.
    pub fn h2_norm(&self) -> f64 {
        let v = self.boundary_values();
        (v.iter().map(|f| f.norm_sqr()).sum::<f64>() / self.nodes as f64).sqrt()
    }

    /// `max_j | |F(e^{it_j})|² − w_j | / w_j`.
    pub fn boundary_modulus_error(&self) -> f64 {
        self.boundary_values().iter().zip(&self.weight).map(|(f, w)| (f.norm_sqr() - w).abs() / w).fold(0.0, f64::max)
    }

    /// `(min, max)` of `|F|` over the boundary nodes and a polar interior
    /// grid of radii `0.1, 0.2, …, 0.9`.
    pub fn modulus_range(&self) -> (f64, f64) {
        let mut values: Vec<f64> = self.boundary_values().iter().map(|v| v.norm()).collect();
        let interior: Vec<f64> = (1..10)
            .into_par_iter()
            .flat_map_iter(|i| {
                let r = i as f64 / 10.0;
                (0..64).map(move |j| self.eval(C64::from_polar(r, 2.0 * PI * j as f64 / 64.0)).norm())
            })
            .collect();
        values.extend(interior);
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(0.0, f64::max);
        (min, max)
    }

    /// Largest `|ln w|` over the nodes.
    pub fn max_abs_log_weight(&self) -> f64 {
        self.weight.iter().map(|w| w.ln().abs()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OuterIdentityReport {
    pub degree: usize,
    pub max_discrepancy: f64,
    pub worst_pair: (usize, usize),
    pub boundary_modulus_error: f64,
    pub h2_norm: f64,
}

/// Compare `⟨F z^i, F z^j⟩_{H²}` with `Σ θ_m ⟨k̃_{a_m} z^i, k̃_{a_m} z^j⟩_{H²}`
/// for all `i, j ≤ degree`, both by boundary quadrature.
pub fn verify_outer_identity(f: &OuterFunction, shift: &ShiftConfig, degree: usize) -> Result<OuterIdentityReport> {
    shift.validate()?;
    let n = f.nodes;
    let fb = f.boundary_values();
    let mut max_discrepancy = 0.0;
    let mut worst_pair = (0, 0);
    for i in 0..=degree {
        for j in 0..=degree {
            let mut lhs = C64::new(0.0, 0.0);
            let mut rhs = C64::new(0.0, 0.0);
            for (idx, fv) in fb.iter().enumerate() {
                let t = 2.0 * PI * idx as f64 / n as f64;
                let e = C64::from_polar(1.0, (i as f64 - j as f64) * t);
                lhs += e * fv.norm_sqr();
                rhs += e * boundary_weight(shift, t);
            }
            let d = (lhs - rhs).norm() / n as f64;
            if d > max_discrepancy {
                max_discrepancy = d;
                worst_pair = (i, j);
            }
        }
    }
    Ok(OuterIdentityReport {
        degree,
        max_discrepancy,
        worst_pair,
        boundary_modulus_error: f.boundary_modulus_error(),
        h2_norm: f.h2_norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::ComplexPoint;

    #[test]
    fn unshifted_is_one() {
        let f = construct_outer(&ShiftConfig::unshifted(), 256).unwrap();
        assert!(f.log_coeffs.iter().all(|c| *c == C64::new(0.0, 0.0)));
        assert_eq!(f.eval(C64::new(0.3, 0.4)), C64::new(1.0, 0.0));
    }

    #[test]
    fn single_shift_recovers_normalized_kernel() {
        let a = C64::new(0.3, 0.0);
        let shift = ShiftConfig::vertex(vec![ComplexPoint::scalar(a)], 1);
        let f = construct_outer(&shift, 1024).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let z = C64::from_polar(0.1 + 0.1 * i as f64, j as f64 * PI / 4.0);
                let want = (1.0 - a.norm_sqr()).sqrt() / (1.0 - a.conj() * z);
                assert!((f.eval(z) - want).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn rejects_bad_nodes() {
        assert!(construct_outer(&ShiftConfig::unshifted(), 300).is_err());
        assert!(construct_outer(&ShiftConfig::unshifted(), 128).is_err());
    }
}
