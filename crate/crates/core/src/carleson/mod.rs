//! One-box (weak) Carleson norms on the disk, in box form and in
//! kernel-testing form, plus Besov–Sobolev quadratures and the kernel
//! multiplier norm built from them.
//!
//! A box with centre angle `φ` and half-width `r` is the arc
//! `Q = {|t − φ| ≤ r}` (`|Q| = min(2r, 2π)`) and its tent
//! `S(Q) = {z : 1 − |z| ≤ r, arg z ∈ Q}`. The origin lies in every tent with
//! `r ≥ 1`.

mod besov;

pub use besov::{
    besov_lp_norm_disk, besov_norm_m, besov_pairing_disk, besov_seminorm_disk, kps_norm_disk, kps_norm_disk_with,
    polar_measure, BesovParams, DiskQuadrature, KpsReport, PolarMeasure, KPS_ANGLES, KPS_RADIAL,
};

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{ComplexPoint, DomainKind, PointSet, C64};

/// Weighted point masses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    pub points: PointSet,
    pub weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(points: PointSet, weights: Vec<f64>) -> Result<Self> {
        let m = Self { points, weights };
        m.validate()?;
        Ok(m)
    }

    pub fn disk(points: &[C64], weights: Vec<f64>) -> Result<Self> {
        Self::new(PointSet::disk(points.iter().copied())?, weights)
    }

    pub fn empty_disk() -> Self {
        Self { points: PointSet { domain: crate::kernels::DomainSpec::disk(), points: vec![] }, weights: vec![] }
    }

    pub fn validate(&self) -> Result<()> {
        if self.points.len() != self.weights.len() {
            return Err(Error::InvalidParameter(format!(
                "{} points but {} weights",
                self.points.len(),
                self.weights.len()
            )));
        }
        if let Some(i) = self.weights.iter().position(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidParameter(format!("weight {i} is negative or not finite")));
        }
        for p in &self.points.points {
            self.points.domain.check(p)?;
        }
        Ok(())
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { points: self.points.clone(), weights: self.weights.iter().map(|w| w * s).collect() }
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().fold(0.0, |a, w| a + w)
    }

    pub fn is_empty(&self) -> bool {
        self.weights.iter().all(|&w| w == 0.0)
    }

    fn disk_points(&self) -> Result<Vec<C64>> {
        if self.points.domain.kind != DomainKind::Disk {
            return Err(Error::InvalidParameter("box norms are implemented on the disk".into()));
        }
        Ok(self.points.points.iter().map(|p| p.z()).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarlesonBox {
    /// Centre of the arc, as an angle.
    pub center: f64,
    /// Half-width of the arc; also the depth of the tent.
    pub radius: f64,
}

impl CarlesonBox {
    pub fn arc_length(&self) -> f64 {
        (2.0 * self.radius).min(2.0 * PI)
    }

    pub fn contains(&self, z: C64) -> bool {
        let depth = 1.0 - z.norm();
        if depth > self.radius {
            return false;
        }
        if z.norm() == 0.0 || self.radius >= PI {
            return true;
        }
        angular_distance(z.arg(), self.center) <= self.radius
    }
}

pub fn angular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxNormReport {
    pub value: f64,
    pub attained_at: Option<CarlesonBox>,
}

/// Dyadic radii `h, 2h, 4h, …` until the tent covers the whole disk,
/// finishing with the full box `r = π`.
fn tower(h: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut r = h.max(1e-300);
    while r < PI {
        out.push(r);
        r *= 2.0;
    }
    out.push(PI);
    out
}

fn box_ratio(mass: f64, b: &CarlesonBox, sigma: f64, p: f64) -> f64 {
    mass.powf(1.0 / p) / b.arc_length().powf(sigma)
}

/// `sup_Q μ(S(Q))^{1/p} / |Q|^σ` over per-support-point dyadic towers.
pub fn box_norm(mu: &DiscreteMeasure, sigma: f64, p: f64, n: usize) -> Result<BoxNormReport> {
    check_exponents(sigma, p)?;
    if n != 1 {
        return Err(Error::InvalidParameter("box norms are implemented for n = 1".into()));
    }
    mu.validate()?;
    let pts = mu.disk_points()?;
    let candidates: Vec<CarlesonBox> = pts
        .iter()
        .zip(&mu.weights)
        .filter(|(_, &w)| w > 0.0)
        .flat_map(|(z, _)| {
            let h = 1.0 - z.norm();
            let center = if z.norm() > 0.0 { z.arg() } else { 0.0 };
            tower(h).into_iter().map(move |radius| CarlesonBox { center, radius })
        })
        .collect();
    let best = candidates
        .par_iter()
        .map(|b| {
            let mass: f64 = pts.iter().zip(&mu.weights).filter(|(z, _)| b.contains(**z)).map(|(_, w)| w).sum();
            (box_ratio(mass, b, sigma, p), *b)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(None::<(f64, CarlesonBox)>, |acc, v| match acc {
            Some(a) if a.0 >= v.0 => Some(a),
            _ => Some(v),
        });
    Ok(match best {
        Some((value, b)) => BoxNormReport { value, attained_at: Some(b) },
        None => BoxNormReport { value: 0.0, attained_at: None },
    })
}

fn check_exponents(sigma: f64, p: f64) -> Result<()> {
    if !(sigma > 0.0) || !(p > 1.0) || !p.is_finite() {
        return Err(Error::InvalidParameter(format!("need sigma > 0 and 1 < p < inf, got {sigma}, {p}")));
    }
    Ok(())
}

/// `k̃_a(z) = (1 − |a|²)^σ / (1 − ⟨z, a⟩)^{2σ}`, principal branch.
pub fn approx_normalized_kernel(a: &ComplexPoint, z: &ComplexPoint, sigma: f64) -> C64 {
    let base = C64::new(1.0, 0.0) - z.dot_conj(a);
    (1.0 - a.norm_sqr()).powf(sigma) * base.powf(-2.0 * sigma)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestingNormReport {
    pub value: f64,
    pub attained_at: Option<ComplexPoint>,
}

/// `max_a (Σ_i w_i |k̃_a(z_i)|^p)^{1/p}` over the probes.
pub fn testing_norm(mu: &DiscreteMeasure, sigma: f64, p: f64, probes: &[ComplexPoint]) -> Result<TestingNormReport> {
    check_exponents(sigma, p)?;
    mu.validate()?;
    for a in probes {
        mu.points.domain.check(a)?;
    }
    if mu.is_empty() || probes.is_empty() {
        return Ok(TestingNormReport { value: 0.0, attained_at: None });
    }
    let values: Vec<f64> = probes
        .par_iter()
        .map(|a| {
            mu.points
                .points
                .iter()
                .zip(&mu.weights)
                .map(|(z, w)| w * approx_normalized_kernel(a, z, sigma).norm().powf(p))
                .sum::<f64>()
                .powf(1.0 / p)
        })
        .collect();
    let (idx, value) =
        values.iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    Ok(TestingNormReport { value, attained_at: Some(probes[idx].clone()) })
}

/// The origin plus the points `(1 − 2^j h) z/|z|` along every support ray.
pub fn default_probes(mu: &DiscreteMeasure) -> Vec<ComplexPoint> {
    let dim = mu.points.domain.dim;
    let mut out = vec![ComplexPoint::origin(dim)];
    for z in &mu.points.points {
        let r = z.norm_sqr().sqrt();
        if r == 0.0 {
            continue;
        }
        let mut depth = 1.0 - r;
        while depth < 1.0 {
            let s = (1.0 - depth) / r;
            out.push(ComplexPoint::new(z.coords.iter().map(|c| c * s).collect()));
            depth *= 2.0;
        }
    }
    out
}

/// Box norm of a measure carried by a tensor polar grid, with the
/// candidate family of every node's dyadic tower, using prefix sums.
pub fn grid_box_norm(radii: &[f64], angles: usize, mass: &[Vec<f64>], sigma: f64, p: f64) -> Result<BoxNormReport> {
    check_exponents(sigma, p)?;
    if mass.len() != radii.len() || mass.iter().any(|row| row.len() != angles) {
        return Err(Error::InvalidParameter("grid measure has the wrong shape".into()));
    }
    // rows ordered by depth 1 − r ascending; cum[k] sums the first k rows
    let mut order: Vec<usize> = (0..radii.len()).collect();
    order.sort_by(|&a, &b| radii[b].total_cmp(&radii[a]));
    let depths: Vec<f64> = order.iter().map(|&i| 1.0 - radii[i]).collect();
    let mut cum = vec![vec![0.0; angles + 1]];
    let mut acc = vec![0.0; angles];
    for &i in &order {
        for (a, m) in acc.iter_mut().zip(&mass[i]) {
            *a += m;
        }
        let mut prefix = vec![0.0; angles + 1];
        for j in 0..angles {
            prefix[j + 1] = prefix[j] + acc[j];
        }
        cum.push(prefix);
    }
    let step = 2.0 * PI / angles as f64;
    let window = |k: usize, j: usize, half: usize| -> f64 {
        let pre = &cum[k];
        if 2 * half + 1 >= angles {
            return pre[angles];
        }
        let lo = j as isize - half as isize;
        let hi = j + half;
        if lo < 0 {
            pre[hi + 1] + pre[angles] - pre[(angles as isize + lo) as usize]
        } else if hi >= angles {
            pre[angles] - pre[lo as usize] + pre[hi + 1 - angles]
        } else {
            pre[hi + 1] - pre[lo as usize]
        }
    };
    let best = (0..radii.len())
        .into_par_iter()
        .flat_map_iter(|ri| {
            let h = 1.0 - radii[ri];
            (0..angles).flat_map(move |j| tower(h).into_iter().map(move |r| (j, r)))
        })
        .map(|(j, r)| {
            let k = depths.partition_point(|&d| d <= r);
            let half = ((r / step) + 1e-9).floor() as usize;
            let b = CarlesonBox { center: j as f64 * step, radius: r };
            (box_ratio(window(k, j, half), &b, sigma, p), b)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(None::<(f64, CarlesonBox)>, |acc, v| match acc {
            Some(a) if a.0 >= v.0 => Some(a),
            _ => Some(v),
        });
    Ok(match best {
        Some((value, b)) => BoxNormReport { value, attained_at: Some(b) },
        None => BoxNormReport { value: 0.0, attained_at: None },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_measure() {
        let mu = DiscreteMeasure::empty_disk();
        assert_eq!(box_norm(&mu, 0.5, 2.0, 1).unwrap().value, 0.0);
        assert_eq!(testing_norm(&mu, 0.5, 2.0, &default_probes(&mu)).unwrap().value, 0.0);
    }

    #[test]
    fn single_mass_closed_form() {
        let z = C64::from_polar(0.9, 0.7);
        let mu = DiscreteMeasure::disk(&[z], vec![3.0]).unwrap();
        for (sigma, p) in [(0.5, 2.0), (0.25, 3.0), (1.0, 1.5)] {
            let v = box_norm(&mu, sigma, p, 1).unwrap();
            let want = 3f64.powf(1.0 / p) / (2.0 * 0.1f64).powf(sigma);
            assert!((v.value - want).abs() < 1e-12 * want);
            assert!((v.attained_at.unwrap().radius - 0.1).abs() < 1e-12);
        }
    }

    #[test]
    fn origin_mass_testing_norm() {
        let mu = DiscreteMeasure::disk(&[C64::new(0.0, 0.0)], vec![1.0]).unwrap();
        let probes = vec![ComplexPoint::scalar(C64::new(0.0, 0.0)), ComplexPoint::scalar(C64::new(0.5, 0.0))];
        let t = testing_norm(&mu, 0.5, 2.0, &probes).unwrap();
        assert!((t.value - 1.0).abs() < 1e-15);
        // box: smallest tent holding the origin has r = 1, |Q| = 2
        let b = box_norm(&mu, 0.5, 2.0, 1).unwrap();
        assert!((b.value - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn grid_and_generic_agree() {
        let radii = [0.3, 0.75, 0.95];
        let angles = 16;
        let mass: Vec<Vec<f64>> =
            (0..3).map(|i| (0..angles).map(|j| ((i * 7 + j * 3) % 5) as f64 + 0.5).collect()).collect();
        let mut pts = Vec::new();
        let mut w = Vec::new();
        for (i, &r) in radii.iter().enumerate() {
            for j in 0..angles {
                pts.push(C64::from_polar(r, 2.0 * PI * j as f64 / angles as f64));
                w.push(mass[i][j]);
            }
        }
        let generic = box_norm(&DiscreteMeasure::disk(&pts, w).unwrap(), 0.5, 2.0, 1).unwrap();
        let fast = grid_box_norm(&radii, angles, &mass, 0.5, 2.0).unwrap();
        assert!((generic.value - fast.value).abs() < 1e-12 * generic.value, "{} {}", generic.value, fast.value);
    }
}
