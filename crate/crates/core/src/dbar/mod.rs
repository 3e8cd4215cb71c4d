//! `∂̄` solvers on the disk: the Cauchy–Pompeiu integral, the Jones kernel
//! for Carleson-measure data, the Koszul corona construction, and boundary
//! Sobolev norms.

mod jones;
mod koszul;
mod sobolev;

pub use jones::{cauchy_pompeiu_measure, h2_carleson_norm, jones_kernel, jones_modulus_bound, jones_solve, JonesData};
pub use koszul::{certify_lower_bound, koszul_corona_disk, KoszulOptions, KoszulReport};
pub use sobolev::{boundary_sobolev_norm, SobolevReport};

use std::f64::consts::PI;
use std::io::{Read, Write};

use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernels::C64;
use crate::special::{gauss_legendre, Rule};

/// Cauchy–Pompeiu integral `u₀(z) = (1/π) ∬_𝔻 g(ζ)/(z − ζ) dA(ζ)`, which
/// solves `∂̄u₀ = g`.
///
/// The disk is split at `|z|`; on each ring the Laurent expansion of
/// `1/(z − ζ)` meets the angular Fourier modes `g_k(ρ)` of `g`:
/// `u₀ = 2 Σ_j ∫_0^{|z|} g_{−j}(ρ)(ρ/z)^{j+1} dρ − 2 Σ_j ∫_{|z|}^1 g_{j+1}(ρ)(z/ρ)^j dρ`.
/// The singular cell never appears, so no principal-value treatment is
/// needed.
#[derive(Clone)]
pub struct CauchyPompeiu {
    rule: Rule,
    angles: usize,
    fft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for CauchyPompeiu {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CauchyPompeiu").field("radial", &self.rule.len()).field("angles", &self.angles).finish()
    }
}

impl CauchyPompeiu {
    pub fn new(radial: usize, angles: usize) -> Result<Self> {
        if radial == 0 || angles < 4 || !angles.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "Cauchy-Pompeiu needs radial > 0 and an even angle count >= 4, got {radial}, {angles}"
            )));
        }
        Ok(Self { rule: gauss_legendre(radial), angles, fft: FftPlanner::new().plan_fft_forward(angles) })
    }

    pub fn angles(&self) -> usize {
        self.angles
    }

    /// Fourier modes `g_k(ρ)`, `k` in FFT order.
    fn ring_modes(&self, rho: f64, ring: impl Fn(f64, usize) -> C64) -> Vec<C64> {
        let m = self.angles;
        let mut buf: Vec<C64> = (0..m).map(|j| ring(rho, j)).collect();
        self.fft.process(&mut buf);
        let scale = 1.0 / m as f64;
        buf.iter_mut().for_each(|v| *v *= scale);
        buf
    }

    fn solve_rings(&self, z: C64, ring: impl Fn(f64, usize) -> C64) -> C64 {
        let m = self.angles;
        let r = z.norm();
        let half = m / 2;
        let mut total = C64::new(0.0, 0.0);
        if r > 0.0 {
            let inner = self.rule.mapped(0.0, r);
            for (&rho, &w) in inner.nodes.iter().zip(&inner.weights) {
                let modes = self.ring_modes(rho, &ring);
                let q = C64::new(rho, 0.0) / z;
                let mut pow = q;
                let mut acc = C64::new(0.0, 0.0);
                for j in 0..half {
                    let k = if j == 0 { 0 } else { m - j };
                    acc += modes[k] * pow;
                    pow *= q;
                }
                total += acc * (2.0 * w);
            }
        }
        if r < 1.0 {
            let outer = self.rule.mapped(r, 1.0);
            for (&rho, &w) in outer.nodes.iter().zip(&outer.weights) {
                let modes = self.ring_modes(rho, &ring);
                let q = z / rho;
                let mut pow = C64::new(1.0, 0.0);
                let mut acc = C64::new(0.0, 0.0);
                for j in 0..half {
                    acc += modes[j + 1] * pow;
                    pow *= q;
                }
                total -= acc * (2.0 * w);
            }
        }
        total
    }

    /// `u₀(z)` for data given as a function on the disk, `|z| ≤ 1`.
    pub fn solve_fn(&self, g: impl Fn(C64) -> C64, z: C64) -> Result<C64> {
        if !(z.norm() <= 1.0) {
            return Err(Error::Domain(format!("{z} is outside the closed disk")));
        }
        let step = 2.0 * PI / self.angles as f64;
        Ok(self.solve_rings(z, |rho, j| g(C64::from_polar(rho, j as f64 * step))))
    }

    /// `u₀(z)` for data on a polar grid, interpolated spectrally in the
    /// radius. The grid's angle count must match the solver's.
    pub fn solve_field(&self, g: &GridField, z: C64) -> Result<C64> {
        if g.angles != self.angles {
            return Err(Error::InvalidParameter(format!(
                "field has {} angles, solver expects {}",
                g.angles, self.angles
            )));
        }
        if !(z.norm() <= 1.0) {
            return Err(Error::Domain(format!("{z} is outside the closed disk")));
        }
        Ok(self.solve_rings(z, |rho, j| g.interpolate_radial(rho, j)))
    }
}

pub fn cauchy_pompeiu_solve(g: &GridField, z: C64) -> Result<C64> {
    CauchyPompeiu::new(g.radii.len().max(16), g.angles)?.solve_field(g, z)
}

/// Complex values on a tensor polar mesh: Gauss–Legendre radii in `(0, 1)`
/// and uniform angles `t_j = 2πj/angles`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub radii: Vec<f64>,
    pub angles: usize,
    /// `values[i][j]` at `radii[i] e^{i t_j}`.
    pub values: Vec<Vec<C64>>,
    bary: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    r: f64,
    t: f64,
    re: f64,
    im: f64,
}

impl GridField {
    pub fn sample(f: impl Fn(C64) -> C64, radial: usize, angles: usize) -> Self {
        let rule = gauss_legendre(radial);
        let radii: Vec<f64> = rule.nodes.iter().map(|x| 0.5 * (x + 1.0)).collect();
        let step = 2.0 * PI / angles as f64;
        let values =
            radii.iter().map(|&r| (0..angles).map(|j| f(C64::from_polar(r, j as f64 * step))).collect()).collect();
        Self::from_parts(radii, angles, values, &rule)
    }

    fn from_parts(radii: Vec<f64>, angles: usize, values: Vec<Vec<C64>>, rule: &Rule) -> Self {
        // barycentric weights for Gauss–Legendre nodes
        let bary = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .enumerate()
            .map(|(i, (x, w))| {
                let s = ((1.0 - x * x) * w).sqrt();
                if i % 2 == 0 {
                    s
                } else {
                    -s
                }
            })
            .collect();
        Self { radii, angles, values, bary }
    }

    /// Angular spacing of the mesh.
    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.angles as f64
    }

    /// Polynomial interpolant through the radial nodes of column `j`.
    pub fn interpolate_radial(&self, rho: f64, j: usize) -> C64 {
        let mut num = C64::new(0.0, 0.0);
        let mut den = 0.0;
        for (i, (&r, &b)) in self.radii.iter().zip(&self.bary).enumerate() {
            let d = rho - r;
            if d == 0.0 {
                return self.values[i][j];
            }
            let t = b / d;
            num += self.values[i][j] * t;
            den += t;
        }
        num / den
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for (i, &r) in self.radii.iter().enumerate() {
            for j in 0..self.angles {
                let v = self.values[i][j];
                out.serialize(CsvRow { r, t: j as f64 * self.spacing(), re: v.re, im: v.im })
                    .map_err(|e| Error::Schema(e.to_string()))?;
            }
        }
        out.flush()?;
        Ok(())
    }

    /// Read `(r, t, re, im)` rows written by [`GridField::write_csv`]; the
    /// radii must be the Gauss–Legendre nodes of their count.
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rows = Vec::new();
        for row in csv::Reader::from_reader(r).deserialize() {
            let row: CsvRow = row.map_err(|e| Error::Schema(e.to_string()))?;
            rows.push(row);
        }
        let mut radii: Vec<f64> = Vec::new();
        for row in &rows {
            if !radii.iter().any(|&x| (x - row.r).abs() < 1e-12) {
                radii.push(row.r);
            }
        }
        radii.sort_by(f64::total_cmp);
        if radii.is_empty() || rows.len() % radii.len() != 0 {
            return Err(Error::Schema("grid field rows do not form a tensor mesh".into()));
        }
        let angles = rows.len() / radii.len();
        let rule = gauss_legendre(radii.len());
        for (x, r) in rule.nodes.iter().zip(&radii) {
            if (0.5 * (x + 1.0) - r).abs() > 1e-9 {
                return Err(Error::Schema("grid field radii are not Gauss-Legendre nodes".into()));
            }
        }
        let step = 2.0 * PI / angles as f64;
        let mut values = vec![vec![C64::new(f64::NAN, 0.0); angles]; radii.len()];
        for row in rows {
            let i = radii.iter().position(|&x| (x - row.r).abs() < 1e-12).unwrap_or(0);
            let j = (row.t / step).round() as usize % angles;
            values[i][j] = C64::new(row.re, row.im);
        }
        if values.iter().flatten().any(|v| v.re.is_nan()) {
            return Err(Error::Schema("grid field has missing nodes".into()));
        }
        Ok(Self::from_parts(radii, angles, values, &rule))
    }
}

/// Centered finite-difference `∂̄u = ½(∂_x + i ∂_y)u`.
pub fn fd_dbar(u: impl Fn(C64) -> C64, z: C64, h: f64) -> C64 {
    let dx = (u(z + h) - u(z - h)) / (2.0 * h);
    let dy = (u(z + C64::new(0.0, h)) - u(z - C64::new(0.0, h))) / (2.0 * h);
    0.5 * (dx + C64::new(0.0, 1.0) * dy)
}

/// Points of the square lattice with spacing `step` inside `|z| ≤ radius`.
pub fn square_grid(step: f64, radius: f64) -> Vec<C64> {
    let n = (radius / step).floor() as i64;
    let mut out = Vec::new();
    for a in -n..=n {
        for b in -n..=n {
            let z = C64::new(a as f64 * step, b as f64 * step);
            if z.norm() <= radius + 1e-12 {
                out.push(z);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_data_gives_conjugate() {
        let cp = CauchyPompeiu::new(24, 32).unwrap();
        for z in [C64::new(0.0, 0.0), C64::new(0.3, -0.2), C64::from_polar(0.9, 2.0), C64::from_polar(1.0, 0.3)] {
            let u = cp.solve_fn(|_| C64::new(1.0, 0.0), z).unwrap();
            assert!((u - z.conj()).norm() < 1e-13, "{z}: {u}");
        }
    }

    #[test]
    fn conjugate_data_gives_half_square() {
        let cp = CauchyPompeiu::new(24, 32).unwrap();
        let z = C64::new(0.4, 0.35);
        let u = cp.solve_fn(|w| w.conj(), z).unwrap();
        assert!((u - z.conj() * z.conj() / 2.0).norm() < 1e-13);
        assert!(cp.solve_fn(|_| C64::new(0.0, 0.0), z).unwrap().norm() == 0.0);
    }

    #[test]
    fn field_path_matches_closure_path() {
        let g = |w: C64| (w * w.conj()).exp() + w.conj() * 0.5;
        let field = GridField::sample(g, 32, 64);
        let cp = CauchyPompeiu::new(32, 64).unwrap();
        let z = C64::new(-0.5, 0.2);
        let a = cp.solve_fn(g, z).unwrap();
        let b = cp.solve_field(&field, z).unwrap();
        assert!((a - b).norm() < 1e-10, "{a} {b}");
    }

    #[test]
    fn csv_round_trip() {
        let field = GridField::sample(|w| w * 2.0 + 1.0, 6, 8);
        let mut buf = Vec::new();
        field.write_csv(&mut buf).unwrap();
        let back = GridField::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.angles, 8);
        for (a, b) in back.values.iter().flatten().zip(field.values.iter().flatten()) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
