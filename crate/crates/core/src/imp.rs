//! Slice integrals showing that no invertible multiplier realizes a convex
//! combination of kernel moduli on the ball or polydisc.
//!
//! With `c = (1 − |α|²)^n` and `A(w) = 1 + c |1 − αw|^{−2n}`, the slice
//! function is `g(z) = ∫_{|λ|=1} ln A(λz) dm(λ)`. An invertible multiplier
//! would force `g` to be constant; here we certify that it is not, with a
//! strictly positive Laplacian.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FalsifierDomain {
    Ball,
    /// The diagonal slice `(z, z, 0, …)` of `𝔻^n` produces the ball
    /// integrand with exponent 2 for every `n ≥ 2`.
    Polydisc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FalsifierConfig {
    pub alpha: C64,
    pub n: usize,
    #[serde(default = "default_nodes")]
    pub lambda_nodes: usize,
    #[serde(default = "default_domain")]
    pub domain: FalsifierDomain,
}

fn default_nodes() -> usize {
    2048
}

fn default_domain() -> FalsifierDomain {
    FalsifierDomain::Ball
}

impl FalsifierConfig {
    pub fn ball(alpha: C64, n: usize) -> Self {
        Self { alpha, n, lambda_nodes: default_nodes(), domain: FalsifierDomain::Ball }
    }

    pub fn polydisc(alpha: C64, n: usize) -> Self {
        Self { domain: FalsifierDomain::Polydisc, ..Self::ball(alpha, n) }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.norm() < 1.0) {
            return Err(Error::InvalidParameter(format!("|alpha| = {} must be < 1", self.alpha.norm())));
        }
        if self.n < 2 {
            return Err(Error::InvalidParameter(format!("dimension {} must be at least 2", self.n)));
        }
        if self.lambda_nodes < 512 {
            return Err(Error::InvalidParameter(format!(
                "{} circle nodes is below the minimum 512",
                self.lambda_nodes
            )));
        }
        Ok(())
    }

    /// Exponent of `|1 − αw|^{-2·}` in the slice integrand.
    pub fn exponent(&self) -> usize {
        match self.domain {
            FalsifierDomain::Ball => self.n,
            FalsifierDomain::Polydisc => 2,
        }
    }

    fn coefficient(&self) -> f64 {
        (1.0 - self.alpha.norm_sqr()).powi(self.exponent() as i32)
    }
}

fn check_point(z: C64) -> Result<()> {
    if z.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{z} is not in the disk")))
    }
}

fn circle_mean(nodes: usize, f: impl Fn(C64) -> f64) -> f64 {
    (0..nodes).map(|j| f(C64::from_polar(1.0, 2.0 * PI * j as f64 / nodes as f64))).sum::<f64>() / nodes as f64
}

pub fn slice_g(cfg: &FalsifierConfig, z: C64) -> Result<f64> {
    cfg.validate()?;
    check_point(z)?;
    let c = cfg.coefficient();
    let n = cfg.exponent() as i32;
    Ok(circle_mean(cfg.lambda_nodes, |lam| {
        let d = (1.0 - cfg.alpha * lam * z).norm_sqr();
        (1.0 + c * d.powi(-n)).ln()
    }))
}

/// `Δg(z) = 4 ∫ |nα|²/|1 − αλz|² · (A − 1)/A² dm(λ)`.
pub fn slice_laplacian(cfg: &FalsifierConfig, z: C64) -> Result<f64> {
    cfg.validate()?;
    check_point(z)?;
    let c = cfg.coefficient();
    let n = cfg.exponent();
    let na2 = (n as f64 * cfg.alpha.norm()).powi(2);
    Ok(4.0
        * circle_mean(cfg.lambda_nodes, |lam| {
            let d = (1.0 - cfg.alpha * lam * z).norm_sqr();
            let excess = c * d.powi(-(n as i32));
            let a = 1.0 + excess;
            na2 / d * excess / (a * a)
        }))
}

/// Five-point finite-difference Laplacian of `slice_g`.
pub fn slice_laplacian_fd(cfg: &FalsifierConfig, z: C64, h: f64) -> Result<f64> {
    let g = |w: C64| slice_g(cfg, w);
    let centre = g(z)?;
    let sum = g(z + h)? + g(z - h)? + g(z + C64::new(0.0, h))? + g(z - C64::new(0.0, h))?;
    Ok((sum - 4.0 * centre) / (h * h))
}

/// Polar grid `r = r_max·i/nr`, `i = 0..=nr`, with `na` angles each.
pub fn standard_grid(r_max: f64, nr: usize, na: usize) -> Vec<C64> {
    (0..=nr)
        .flat_map(|i| {
            (0..na).map(move |j| C64::from_polar(r_max * i as f64 / nr as f64, 2.0 * PI * j as f64 / na as f64))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSample {
    pub z: C64,
    pub g: f64,
    pub laplacian: f64,
    pub laplacian_fd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FalsifyReport {
    pub alpha: C64,
    pub n: usize,
    pub domain: FalsifierDomain,
    /// Set in polydisc mode: the diagonal slice gives the `n = 2` ball integrand.
    pub polydisc_reduces_to_ball_n2: bool,
    pub min_laplacian: f64,
    pub g_min: f64,
    pub g_max: f64,
    pub g_range: f64,
    /// `g(0.6) − g(0)`.
    pub g_rise: f64,
    pub max_fd_relative_error: f64,
    /// `g(r)` nondecreasing on `[0, 0.9]`; observed, not a theorem.
    pub radial_monotone: bool,
    pub falsified: bool,
    pub conclusion: String,
    pub samples: Vec<GridSample>,
}

pub const FD_STEP: f64 = 1e-3;

pub fn falsify_report(cfg: &FalsifierConfig, grid: &[C64]) -> Result<FalsifyReport> {
    cfg.validate()?;
    let samples = grid
        .par_iter()
        .map(|&z| {
            Ok(GridSample {
                z,
                g: slice_g(cfg, z)?,
                laplacian: slice_laplacian(cfg, z)?,
                laplacian_fd: slice_laplacian_fd(cfg, z, FD_STEP)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let min_laplacian = samples.iter().map(|s| s.laplacian).fold(f64::INFINITY, f64::min);
    let g_min = samples.iter().map(|s| s.g).fold(f64::INFINITY, f64::min);
    let g_max = samples.iter().map(|s| s.g).fold(f64::NEG_INFINITY, f64::max);
    let max_fd_relative_error = samples
        .iter()
        .filter(|s| s.laplacian != 0.0)
        .map(|s| (s.laplacian - s.laplacian_fd).abs() / s.laplacian.abs())
        .fold(0.0, f64::max);
    let g_rise = slice_g(cfg, C64::new(0.6, 0.0))? - slice_g(cfg, C64::new(0.0, 0.0))?;
    let profile: Vec<f64> = (0..=90).map(|i| slice_g(cfg, C64::new(i as f64 / 100.0, 0.0))).collect::<Result<_>>()?;
    let radial_monotone = profile.windows(2).all(|w| w[1] >= w[0] - 1e-14);
    let falsified = cfg.alpha.norm() > 0.0 && min_laplacian > 0.0 && g_rise > 0.0;
    let conclusion = if cfg.alpha.norm() == 0.0 {
        "constant; no falsification".to_string()
    } else if falsified {
        "g is not constant: the invertible multiplier property fails".to_string()
    } else {
        "inconclusive on this grid".to_string()
    };
    Ok(FalsifyReport {
        alpha: cfg.alpha,
        n: cfg.n,
        domain: cfg.domain,
        polydisc_reduces_to_ball_n2: cfg.domain == FalsifierDomain::Polydisc,
        min_laplacian,
        g_min,
        g_max,
        g_range: g_max - g_min,
        g_rise,
        max_fd_relative_error,
        radial_monotone,
        falsified,
        conclusion,
        samples,
    })
}
