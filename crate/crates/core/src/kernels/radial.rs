use serde::{Deserialize, Serialize};

use super::{check_besov_range, C64};
use crate::error::{Error, Result};
use crate::special::gamma_ratio;

/// Taylor coefficients `c_0..c_K` of a function on the disk.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PowerSeries1D {
    pub coeffs: Vec<C64>,
}

impl PowerSeries1D {
    pub fn new(coeffs: Vec<C64>) -> Self {
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self { coeffs: coeffs.iter().map(|&c| C64::new(c, 0.0)).collect() }
    }

    pub fn constant(c: C64) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn monomial(k: usize, c: C64) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); k + 1];
        coeffs[k] = c;
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `m`-th complex derivative.
    pub fn derivative(&self, m: usize) -> PowerSeries1D {
        if m >= self.coeffs.len() {
            return PowerSeries1D::constant(C64::new(0.0, 0.0));
        }
        let coeffs = (m..self.coeffs.len())
            .map(|k| {
                let falling: f64 = (0..m).map(|j| (k - j) as f64).product();
                self.coeffs[k] * falling
            })
            .collect();
        PowerSeries1D { coeffs }
    }

    pub fn mul(&self, other: &PowerSeries1D) -> PowerSeries1D {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return PowerSeries1D::default();
        }
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PowerSeries1D { coeffs: out }
    }

    /// `f(e^{iφ} z)`.
    pub fn rotate(&self, phi: f64) -> PowerSeries1D {
        let coeffs = self.coeffs.iter().enumerate().map(|(k, c)| c * C64::from_polar(1.0, phi * k as f64)).collect();
        PowerSeries1D { coeffs }
    }

    pub fn sup_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Coefficient multiplier of the radial operator `R^{γ,t}` at degree `k`:
/// `Γ(n+1+γ) Γ(n+1+k+γ+t) / (Γ(n+1+γ+t) Γ(n+1+k+γ))`.
pub fn radial_multiplier(gamma: f64, t: f64, n: usize, k: usize) -> Result<f64> {
    let base = n as f64 + 1.0 + gamma;
    for (x, what) in [(base - 1.0, "n+gamma"), (base - 1.0 + t, "n+gamma+t")] {
        if x < 0.0 && x == x.floor() {
            return Err(Error::InvalidParameter(format!("{what} = {x} is a negative integer")));
        }
    }
    let k = k as f64;
    gamma_ratio(base, base + k + t, base + t, base + k)
}

/// Apply `R^{γ,t}` (or its inverse) coefficientwise.
pub fn radial_coeff_transform(gamma: f64, t: f64, n: usize, s: &PowerSeries1D, inverse: bool) -> Result<PowerSeries1D> {
    let coeffs = s
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let m = radial_multiplier(gamma, t, n, k)?;
            if m == 0.0 || !m.is_finite() {
                return Err(Error::InvalidParameter(format!("radial multiplier degenerate at degree {k}")));
            }
            Ok(if inverse { c / m } else { c * m })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PowerSeries1D { coeffs })
}

/// Coefficients `c_k` of the Besov–Sobolev kernel `k_w(z) = Σ c_k (w̄ z)^k`
/// on the disk, the reproducing kernel of the pairing
/// `⟨f, g⟩ = ∫ R_{t_p} f · conj(R_{t_p'} g) dν_α`.
///
/// Here `R_t = R^{α−t, t}`, `t_p = (2+α)/p − σ`, `t_p' = (2+α)/p' − σ`, and
/// `c_k = K^α_k / (m_k(t_p) m_k(t_p'))` with `K^α_k` the coefficients of
/// `(1 − w̄z)^{−(2+α)}`.
pub fn besov_kernel_coeffs(sigma: f64, alpha: f64, p: f64, trunc: usize) -> Result<PowerSeries1D> {
    check_besov_range(sigma, p, alpha)?;
    let q = p / (p - 1.0);
    let tp = (2.0 + alpha) / p - sigma;
    let tq = (2.0 + alpha) / q - sigma;
    let coeffs = (0..=trunc)
        .map(|k| {
            let bergman = gamma_ratio(k as f64 + 2.0 + alpha, 1.0, 2.0 + alpha, k as f64 + 1.0)?;
            let mp = radial_multiplier(alpha - tp, tp, 1, k)?;
            let mq = radial_multiplier(alpha - tq, tq, 1, k)?;
            Ok(C64::new(bergman / (mp * mq), 0.0))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PowerSeries1D { coeffs })
}
