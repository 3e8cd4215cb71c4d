//! Detect whether two kernel matrices on the same points are rescalings
//! `K_ij = ψ_i k_ij conj(ψ_j)` of each other, and recover `ψ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::C64;
use crate::linalg::CMat;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RescalingWitness {
    pub psi: Vec<C64>,
    /// `θ_j = arg(K_1j / k_1j)`, so `θ_1 = 0`.
    pub theta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// `|K_ij|²/(K_ii K_jj) ≠ |k_ij|²/(k_ii k_jj)`.
    Modulus { i: usize, j: usize, big: f64, small: f64 },
    /// `θ_jl ≠ θ_1l − θ_1j` (mod 2π).
    Cocycle { j: usize, l: usize, residual: f64 },
    /// Re-applying the recovered `ψ` misses `K_ij`.
    Reproduction { i: usize, j: usize, error: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RescalingCheck {
    pub is_rescaling: bool,
    pub witness: Option<RescalingWitness>,
    pub violation: Option<Violation>,
}

/// Wrap an angle into `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    use std::f64::consts::PI;
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

pub fn apply_rescaling(k: &CMat, psi: &[C64]) -> Result<CMat> {
    if psi.len() != k.nrows() || !k.is_square() {
        return Err(Error::InvalidParameter(format!(
            "{} rescaling values for a {}x{} matrix",
            psi.len(),
            k.nrows(),
            k.ncols()
        )));
    }
    if let Some(i) = psi.iter().position(|p| p.norm() == 0.0) {
        return Err(Error::InvalidParameter(format!("psi vanishes at index {i}")));
    }
    Ok(CMat::from_fn(k.nrows(), k.ncols(), |i, j| psi[i] * k[(i, j)] * psi[j].conj()))
}

fn validate(m: &CMat, name: &str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::InvalidParameter(format!("{name} is not square")));
    }
    let n = m.nrows();
    let scale = (0..n).map(|i| m[(i, i)].norm()).fold(0.0, f64::max);
    for i in 0..n {
        if !(m[(i, i)].re > 0.0) {
            return Err(Error::InvalidParameter(format!("{name} has nonpositive diagonal at {i}")));
        }
        for j in 0..n {
            if m[(i, j)].norm() == 0.0 {
                return Err(Error::InvalidParameter(format!("{name} vanishes at ({i}, {j})")));
            }
            if (m[(i, j)] - m[(j, i)].conj()).norm() > 1e-12 * scale {
                return Err(Error::InvalidParameter(format!("{name} is not self-adjoint at ({i}, {j})")));
            }
        }
    }
    Ok(())
}

/// `d(i, j) = √(1 − |m_ij|²/(m_ii m_jj))` for a kernel matrix.
pub fn matrix_distance(m: &CMat, i: usize, j: usize) -> f64 {
    let r = m[(i, j)].norm_sqr() / (m[(i, i)].re * m[(j, j)].re);
    (1.0 - r).clamp(0.0, 1.0).sqrt()
}

/// Decide whether `big` is a rescaling of `small` within `tol`.
///
/// Moduli are compared as normalized ratios, phases through the cocycle
/// over triples `(1, j, l)`, and an accepted witness is re-applied as a
/// final check.
pub fn check_rescaling(big: &CMat, small: &CMat, tol: f64) -> Result<RescalingCheck> {
    validate(big, "K")?;
    validate(small, "k")?;
    if big.shape() != small.shape() {
        return Err(Error::InvalidParameter("matrices differ in size".into()));
    }
    let n = big.nrows();
    let reject = |v: Violation| Ok(RescalingCheck { is_rescaling: false, witness: None, violation: Some(v) });
    if n == 0 {
        return Ok(RescalingCheck {
            is_rescaling: true,
            witness: Some(RescalingWitness { psi: vec![], theta: vec![] }),
            violation: None,
        });
    }

    let ratio = |m: &CMat, i: usize, j: usize| m[(i, j)].norm_sqr() / (m[(i, i)].re * m[(j, j)].re);
    for i in 0..n {
        for j in i + 1..n {
            let (rb, rs) = (ratio(big, i, j), ratio(small, i, j));
            if (rb - rs).abs() > tol * rb.max(rs).max(f64::MIN_POSITIVE) {
                return reject(Violation::Modulus { i, j, big: rb, small: rs });
            }
        }
    }

    let arg = |i: usize, j: usize| (big[(i, j)] / small[(i, j)]).arg();
    // θ_1 = 0 exactly; arg(K_11/k_11) would only carry roundoff
    let theta: Vec<f64> = (0..n).map(|j| if j == 0 { 0.0 } else { arg(0, j) }).collect();
    let angle_tol = tol * n as f64;
    for j in 1..n {
        for l in j + 1..n {
            let residual = wrap_angle(arg(j, l) - (theta[l] - theta[j])).abs();
            if residual > angle_tol {
                return reject(Violation::Cocycle { j, l, residual });
            }
        }
    }

    let psi: Vec<C64> =
        (0..n).map(|j| C64::from_polar((big[(j, j)].re / small[(j, j)].re).sqrt(), -theta[j])).collect();
    let rebuilt = apply_rescaling(small, &psi)?;
    for i in 0..n {
        for j in 0..n {
            let scale = (big[(i, i)].re * big[(j, j)].re).sqrt();
            let error = (rebuilt[(i, j)] - big[(i, j)]).norm() / scale;
            if error > angle_tol.max(tol) {
                return reject(Violation::Reproduction { i, j, error });
            }
        }
    }
    Ok(RescalingCheck { is_rescaling: true, witness: Some(RescalingWitness { psi, theta }), violation: None })
}
