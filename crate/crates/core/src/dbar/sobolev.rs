use std::f64::consts::PI;

use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::C64;
use crate::special::{gauss_jacobi_unit, ln_gamma_signed};

/// Both forms of the circle Sobolev norm with measure `dt` (no `1/2π`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SobolevReport {
    /// `(∫|f|^p dt + ∬ |f(t)−f(u)|^p / |e^{it}−e^{iu}|^{2−pσ} du dt)^{1/p}`.
    pub difference_form: f64,
    /// `(∫|f|^p dt + ∬_𝔻 |∇Pf|^p (1−|z|²)^{p(σ+1)−2} dA)^{1/p}`, `dA = dx dy`.
    pub gradient_form: f64,
    pub lp_part: f64,
    pub difference_integral: f64,
    pub gradient_integral: f64,
    /// `gradient_form / difference_form`.
    pub ratio: f64,
}

fn fourier(samples: &[C64]) -> Vec<C64> {
    let n = samples.len();
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    buf.iter().map(|v| v / n as f64).collect()
}

fn freq(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Norms of the boundary function sampled at `t_j = 2πj/n`.
///
/// The difference integral has an integrable singularity on the diagonal;
/// the local model `|f'(t)|^p |2 sin(s/2)|^{p−2+pσ}` is subtracted and
/// integrated in closed form, and the remainder goes to the trapezoid rule.
/// Samples whose remainder is not small relative to the model are flagged.
pub fn boundary_sobolev_norm(samples: &[C64], sigma: f64, p: f64) -> Result<SobolevReport> {
    let n = samples.len();
    if !(p > 1.0 && p.is_finite()) || !(sigma > 0.0 && sigma < 1.0 / p) {
        return Err(Error::InvalidParameter(format!("need 1 < p and 0 < sigma < 1/p, got {sigma}, {p}")));
    }
    if n < 8 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("need an even sample count >= 8, got {n}")));
    }
    if samples.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::Numerical("non-finite boundary sample".into()));
    }
    let h = 2.0 * PI / n as f64;
    let lp_part: f64 = samples.iter().map(|v| v.norm().powf(p)).sum::<f64>() * h;

    let coeffs = fourier(samples);
    // f'(t_j) by spectral differentiation, Nyquist mode dropped
    let mut dcoef: Vec<C64> = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| if k == n / 2 { C64::new(0.0, 0.0) } else { c * C64::new(0.0, freq(k, n) as f64) })
        .collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut dcoef);
    let dmod: Vec<f64> = dcoef.iter().map(|v| v.norm().powf(p)).collect();

    let a = p - 2.0 + p * sigma;
    let denom_exp = 2.0 - p * sigma;
    // ∫_0^{2π} |2 sin(s/2)|^a ds
    let model_total = 2.0 * PI * (ln_gamma_signed(1.0 + a).0 - 2.0 * ln_gamma_signed(1.0 + a / 2.0).0).exp();
    let chord: Vec<f64> = (0..n).map(|k| (2.0 * (PI * k as f64 / n as f64).sin()).abs()).collect();

    let mut remainder = 0.0;
    let mut model = 0.0;
    for i in 0..n {
        model += dmod[i] * model_total * h;
        for k in 1..n {
            let j = (i + k) % n;
            let diff = (samples[i] - samples[j]).norm().powf(p) / chord[k].powf(denom_exp);
            remainder += (diff - dmod[i] * chord[k].powf(a)) * h * h;
        }
    }
    let difference_integral = model + remainder;
    if !(difference_integral >= -1e-9 * model.abs().max(1.0)) || !difference_integral.is_finite() {
        return Err(Error::Numerical(format!(
            "difference integral {difference_integral} is not resolved; samples too rough for the mesh"
        )));
    }
    let difference_integral = difference_integral.max(0.0);

    let gradient_integral = poisson_gradient_integral(&coeffs, sigma, p)?;
    let difference_form = (lp_part + difference_integral).powf(1.0 / p);
    let gradient_form = (lp_part + gradient_integral).powf(1.0 / p);
    Ok(SobolevReport {
        difference_form,
        gradient_form,
        lp_part,
        difference_integral,
        gradient_integral,
        ratio: if difference_form > 0.0 { gradient_form / difference_form } else { 1.0 },
    })
}

/// `∬ |∇Pf|^p (1−|z|²)^β dx dy` with
/// `|∇Pf|² = 2(|Σ_{k≥1} k f̂_k z^{k−1}|² + |Σ_{k≥1} k f̂_{−k} z̄^{k−1}|²)`.
fn poisson_gradient_integral(coeffs: &[C64], sigma: f64, p: f64) -> Result<f64> {
    let n = coeffs.len();
    let half = n / 2;
    let beta = p * (sigma + 1.0) - 2.0;
    let radial = gauss_jacobi_unit(96.min(half.max(32)), beta)?;
    let angles = n;
    let pos: Vec<C64> = (1..half).map(|k| coeffs[k] * k as f64).collect();
    let neg: Vec<C64> = (1..half).map(|k| coeffs[n - k] * k as f64).collect();
    let dt = 2.0 * PI / angles as f64;
    let mut total = 0.0;
    for (&s, &w) in radial.nodes.iter().zip(&radial.weights) {
        // s = r², dx dy = ½ ds dt
        let r = s.sqrt();
        for j in 0..angles {
            let z = C64::from_polar(r, j as f64 * dt);
            let horner = |c: &[C64], x: C64| c.iter().rev().fold(C64::new(0.0, 0.0), |acc, &v| acc * x + v);
            let g2 = 2.0 * (horner(&pos, z).norm_sqr() + horner(&neg, z.conj()).norm_sqr());
            total += g2.powf(p / 2.0) * w * 0.5 * dt;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma_ratio;

    fn samples(n: usize, f: impl Fn(f64) -> C64) -> Vec<C64> {
        (0..n).map(|j| f(2.0 * PI * j as f64 / n as f64)).collect()
    }

    #[test]
    fn constant_has_lp_norm_only() {
        let r = boundary_sobolev_norm(&samples(64, |_| C64::new(0.0, 3.0)), 0.3, 2.0).unwrap();
        assert!(r.difference_integral.abs() < 1e-12);
        assert!((r.difference_form - 3.0 * (2.0 * PI).sqrt()).abs() < 1e-12);
        assert!(r.gradient_integral.abs() < 1e-12);
    }

    #[test]
    fn exponential_matches_translation_oracle() {
        // |e^{it} − e^{iu}| = |2 sin(s/2)|, so the double integral is
        // 2π ∫_0^{2π} |2 sin(s/2)|^{p−2+pσ} ds = 2π · 2π Γ(1+a)/Γ(1+a/2)².
        for &(sigma, p) in &[(0.3, 2.0), (0.2, 3.0), (0.6, 1.5)] {
            let r = boundary_sobolev_norm(&samples(256, |t| C64::from_polar(1.0, t)), sigma, p).unwrap();
            let a = p - 2.0 + p * sigma;
            let exact = 4.0 * PI * PI * gamma_ratio(1.0 + a, 1.0, 1.0 + a / 2.0, 1.0 + a / 2.0).unwrap();
            assert!((r.difference_integral - exact).abs() < 1e-8 * exact, "{} vs {exact}", r.difference_integral);
            // |∇Pf| ≡ √2 for Pf = z: 2^{p/2} π / (β + 1)
            let beta = p * (sigma + 1.0) - 2.0;
            let g = 2f64.powf(p / 2.0) * PI / (beta + 1.0);
            assert!((r.gradient_integral - g).abs() < 1e-10 * g);
        }
    }

    #[test]
    fn rejects_out_of_range_sigma() {
        assert!(boundary_sobolev_norm(&samples(64, |_| C64::new(1.0, 0.0)), 0.6, 2.0).is_err());
    }
}
