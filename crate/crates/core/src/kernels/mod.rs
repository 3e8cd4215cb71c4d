//! Reproducing kernels on the disk, ball and polydisc.
//!
//! Kernels are written `k(x, y) = k_y(x)`: holomorphic in `x`,
//! antiholomorphic in `y`, so `k(x, y) = conj(k(y, x))`.

mod radial;

pub use radial::{besov_kernel_coeffs, radial_coeff_transform, radial_multiplier, PowerSeries1D};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const DEFAULT_TRUNC: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainKind {
    Disk,
    Ball,
    Polydisc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub kind: DomainKind,
    pub dim: usize,
}

impl DomainSpec {
    pub fn disk() -> Self {
        Self { kind: DomainKind::Disk, dim: 1 }
    }

    pub fn ball(n: usize) -> Self {
        Self { kind: DomainKind::Ball, dim: n }
    }

    pub fn polydisc(n: usize) -> Self {
        Self { kind: DomainKind::Polydisc, dim: n }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || (self.kind == DomainKind::Disk && self.dim != 1) {
            return Err(Error::InvalidParameter(format!("dimension {} is not valid for {:?}", self.dim, self.kind)));
        }
        Ok(())
    }

    /// Same point set: disk, ball and polydisc coincide in dimension one.
    pub fn same_set(&self, other: &DomainSpec) -> bool {
        self.dim == other.dim && (self.kind == other.kind || self.dim == 1)
    }

    pub fn contains(&self, z: &ComplexPoint) -> bool {
        if z.dim() != self.dim || z.coords.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return false;
        }
        match self.kind {
            DomainKind::Disk | DomainKind::Ball => z.norm_sqr() < 1.0,
            DomainKind::Polydisc => z.coords.iter().all(|c| c.norm_sqr() < 1.0),
        }
    }

    pub fn check(&self, z: &ComplexPoint) -> Result<()> {
        if self.contains(z) {
            Ok(())
        } else {
            Err(Error::Domain(format!("{z:?} is not in {:?}({})", self.kind, self.dim)))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComplexPoint {
    pub coords: Vec<C64>,
}

impl ComplexPoint {
    pub fn new(coords: Vec<C64>) -> Self {
        Self { coords }
    }

    pub fn scalar(z: C64) -> Self {
        Self { coords: vec![z] }
    }

    pub fn origin(n: usize) -> Self {
        Self { coords: vec![C64::new(0.0, 0.0); n] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coords.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `Σ x_j conj(y_j)`.
    pub fn dot_conj(&self, other: &ComplexPoint) -> C64 {
        self.coords.iter().zip(&other.coords).map(|(x, y)| x * y.conj()).sum()
    }

    pub fn distance(&self, other: &ComplexPoint) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
    }

    /// First coordinate; the only one on the disk.
    pub fn z(&self) -> C64 {
        self.coords[0]
    }
}

impl From<C64> for ComplexPoint {
    fn from(z: C64) -> Self {
        Self::scalar(z)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    pub domain: DomainSpec,
    pub points: Vec<ComplexPoint>,
}

impl PointSet {
    pub fn new(domain: DomainSpec, points: Vec<ComplexPoint>) -> Result<Self> {
        domain.validate()?;
        for p in &points {
            domain.check(p)?;
        }
        Ok(Self { domain, points })
    }

    pub fn disk(points: impl IntoIterator<Item = C64>) -> Result<Self> {
        Self::new(DomainSpec::disk(), points.into_iter().map(ComplexPoint::scalar).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of a point within `tol` of `a`.
    pub fn position(&self, a: &ComplexPoint, tol: f64) -> Option<usize> {
        self.points.iter().position(|p| p.distance(a) <= tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelFamily {
    SzegoDisk,
    HardyBall,
    BergmanBall,
    HardyPolydisc,
    BergmanPolydisc,
    BesovSobolevDisk,
}

impl KernelFamily {
    pub const ALL: [KernelFamily; 6] = [
        KernelFamily::SzegoDisk,
        KernelFamily::HardyBall,
        KernelFamily::BergmanBall,
        KernelFamily::HardyPolydisc,
        KernelFamily::BergmanPolydisc,
        KernelFamily::BesovSobolevDisk,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub family: KernelFamily,
    #[serde(default = "one")]
    pub n: usize,
    #[serde(default)]
    pub sigma: Option<f64>,
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub trunc: Option<usize>,
}

fn one() -> usize {
    1
}

impl KernelSpec {
    fn plain(family: KernelFamily, n: usize) -> Self {
        Self { family, n, sigma: None, p: None, alpha: None, trunc: None }
    }

    pub fn szego_disk() -> Self {
        Self::plain(KernelFamily::SzegoDisk, 1)
    }

    pub fn hardy_ball(n: usize) -> Self {
        Self::plain(KernelFamily::HardyBall, n)
    }

    pub fn bergman_ball(n: usize) -> Self {
        Self::plain(KernelFamily::BergmanBall, n)
    }

    pub fn hardy_polydisc(n: usize) -> Self {
        Self::plain(KernelFamily::HardyPolydisc, n)
    }

    pub fn bergman_polydisc(n: usize) -> Self {
        Self::plain(KernelFamily::BergmanPolydisc, n)
    }

    pub fn besov_sobolev_disk(sigma: f64, p: f64, alpha: f64, trunc: usize) -> Self {
        Self {
            family: KernelFamily::BesovSobolevDisk,
            n: 1,
            sigma: Some(sigma),
            p: Some(p),
            alpha: Some(alpha),
            trunc: Some(trunc),
        }
    }

    pub fn domain(&self) -> DomainSpec {
        match self.family {
            KernelFamily::SzegoDisk | KernelFamily::BesovSobolevDisk => DomainSpec::disk(),
            KernelFamily::HardyBall | KernelFamily::BergmanBall => DomainSpec::ball(self.n),
            KernelFamily::HardyPolydisc | KernelFamily::BergmanPolydisc => DomainSpec::polydisc(self.n),
        }
    }

    /// `(σ, p, α, K)` of a Besov–Sobolev spec.
    pub fn besov_params(&self) -> Result<(f64, f64, f64, usize)> {
        let missing = |name: &str| Error::InvalidParameter(format!("besov kernel needs {name}"));
        let sigma = self.sigma.ok_or_else(|| missing("sigma"))?;
        let p = self.p.ok_or_else(|| missing("p"))?;
        let alpha = self.alpha.ok_or_else(|| missing("alpha"))?;
        Ok((sigma, p, alpha, self.trunc.unwrap_or(DEFAULT_TRUNC)))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        match self.family {
            KernelFamily::SzegoDisk | KernelFamily::BesovSobolevDisk if self.n != 1 => {
                Err(Error::InvalidParameter(format!("{:?} lives on the disk, got n={}", self.family, self.n)))
            }
            KernelFamily::BesovSobolevDisk => {
                let (sigma, p, alpha, _) = self.besov_params()?;
                check_besov_range(sigma, p, alpha)
            }
            _ => Ok(()),
        }
    }
}

pub(crate) fn check_besov_range(sigma: f64, p: f64, alpha: f64) -> Result<()> {
    if !(sigma >= 0.0) || !(p > 1.0 && p.is_finite()) || !(alpha > -1.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "besov parameters need sigma >= 0, 1 < p < inf, alpha > -1; got sigma={sigma}, p={p}, alpha={alpha}"
        )));
    }
    Ok(())
}

/// A validated kernel ready for repeated evaluation.
///
/// Besov–Sobolev coefficients are computed once here.
#[derive(Debug, Clone)]
pub struct Kernel {
    spec: KernelSpec,
    domain: DomainSpec,
    coeffs: Vec<f64>,
}

impl Kernel {
    pub fn new(spec: KernelSpec) -> Result<Self> {
        spec.validate()?;
        let coeffs = if spec.family == KernelFamily::BesovSobolevDisk {
            let (sigma, p, alpha, trunc) = spec.besov_params()?;
            besov_kernel_coeffs(sigma, alpha, p, trunc)?.coeffs.iter().map(|c| c.re).collect()
        } else {
            Vec::new()
        };
        Ok(Self { spec, domain: spec.domain(), coeffs })
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn domain(&self) -> DomainSpec {
        self.domain
    }

    pub fn check(&self, z: &ComplexPoint) -> Result<()> {
        self.domain.check(z)
    }

    /// `k(x, y)` without domain checks.
    pub fn eval_unchecked(&self, x: &ComplexPoint, y: &ComplexPoint) -> C64 {
        let one = C64::new(1.0, 0.0);
        match self.spec.family {
            KernelFamily::SzegoDisk => one / (one - x.z() * y.z().conj()),
            KernelFamily::HardyBall => (one - x.dot_conj(y)).powi(-(self.spec.n as i32)),
            KernelFamily::BergmanBall => (one - x.dot_conj(y)).powi(-(self.spec.n as i32 + 1)),
            KernelFamily::HardyPolydisc => {
                x.coords.iter().zip(&y.coords).map(|(a, b)| one / (one - a * b.conj())).product()
            }
            KernelFamily::BergmanPolydisc => {
                x.coords.iter().zip(&y.coords).map(|(a, b)| (one - a * b.conj()).powi(-2)).product()
            }
            KernelFamily::BesovSobolevDisk => {
                let w = x.z() * y.z().conj();
                self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * w + c)
            }
        }
    }

    pub fn eval(&self, x: &ComplexPoint, y: &ComplexPoint) -> Result<C64> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.eval_unchecked(x, y))
    }

    /// `k(x, x)`, real and positive.
    pub fn diag(&self, x: &ComplexPoint) -> f64 {
        self.eval_unchecked(x, x).re
    }

    /// `k̃_a(y) = k(y, a) / √k(a, a)`.
    pub fn normalized_unchecked(&self, a: &ComplexPoint, y: &ComplexPoint) -> C64 {
        self.eval_unchecked(y, a) / self.diag(a).sqrt()
    }

    pub fn normalized(&self, a: &ComplexPoint, y: &ComplexPoint) -> Result<C64> {
        self.check(a)?;
        self.check(y)?;
        Ok(self.normalized_unchecked(a, y))
    }

    pub fn distance(&self, x: &ComplexPoint, y: &ComplexPoint) -> Result<f64> {
        let kxy = self.eval(x, y)?;
        let r = kxy.norm_sqr() / (self.diag(x) * self.diag(y));
        Ok((1.0 - r).clamp(0.0, 1.0).sqrt())
    }
}

pub fn eval_kernel(spec: &KernelSpec, x: &ComplexPoint, y: &ComplexPoint) -> Result<C64> {
    Kernel::new(*spec)?.eval(x, y)
}

pub fn eval_normalized_kernel(spec: &KernelSpec, a: &ComplexPoint, y: &ComplexPoint) -> Result<C64> {
    Kernel::new(*spec)?.normalized(a, y)
}

/// `d_k(x, y) = √(1 − |k(x,y)|² / (k(x,x) k(y,y)))`.
pub fn kernel_distance(spec: &KernelSpec, x: &ComplexPoint, y: &ComplexPoint) -> Result<f64> {
    Kernel::new(*spec)?.distance(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn pt(z: C64) -> ComplexPoint {
        ComplexPoint::scalar(z)
    }

    #[test]
    fn closed_forms() {
        let k = eval_kernel(
            &KernelSpec::hardy_polydisc(2),
            &ComplexPoint::new(vec![c(0.3, 0.1), c(-0.2, 0.5)]),
            &ComplexPoint::origin(2),
        )
        .unwrap();
        assert!((k - 1.0).norm() < 1e-15);

        let k = eval_kernel(&KernelSpec::bergman_ball(1), &pt(c(0.5, 0.0)), &pt(c(0.5, 0.0))).unwrap();
        assert!((k.re - 16.0 / 9.0).abs() < 1e-14 && k.im == 0.0);

        let k = eval_kernel(&KernelSpec::szego_disk(), &pt(c(0.0, 0.0)), &pt(c(0.0, 0.7))).unwrap();
        assert!((k - 1.0).norm() < 1e-15);
    }

    #[test]
    fn normalized_kernels() {
        let s = KernelSpec::szego_disk();
        let v = eval_normalized_kernel(&s, &pt(c(0.0, 0.0)), &pt(c(0.4, -0.2))).unwrap();
        assert!((v - 1.0).norm() < 1e-15);
        let v = eval_normalized_kernel(&s, &pt(c(0.6, 0.0)), &pt(c(0.0, 0.0))).unwrap();
        assert!((v.re - 0.8).abs() < 1e-15);
        let a = pt(c(0.2, 0.5));
        let k = Kernel::new(s).unwrap();
        let v = k.normalized(&a, &a).unwrap();
        assert!((v.re - k.diag(&a).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn distance_from_origin_is_modulus() {
        let s = KernelSpec::szego_disk();
        let a = c(0.3, -0.4);
        let d = kernel_distance(&s, &pt(c(0.0, 0.0)), &pt(a)).unwrap();
        assert!((d - a.norm()).abs() < 1e-12);
        assert_eq!(kernel_distance(&s, &pt(a), &pt(a)).unwrap(), 0.0);
    }

    #[test]
    fn domain_errors() {
        let s = KernelSpec::szego_disk();
        assert!(eval_kernel(&s, &pt(c(1.0, 0.0)), &pt(c(0.0, 0.0))).is_err());
        let ball = KernelSpec::hardy_ball(2);
        let bad = ComplexPoint::new(vec![c(0.8, 0.0), c(0.7, 0.0)]);
        assert!(eval_kernel(&ball, &bad, &ComplexPoint::origin(2)).is_err());
        // same point is fine in the polydisc
        assert!(eval_kernel(&KernelSpec::hardy_polydisc(2), &bad, &ComplexPoint::origin(2)).is_ok());
        let mut wrong = KernelSpec::szego_disk();
        wrong.n = 2;
        assert!(Kernel::new(wrong).is_err());
        assert!(Kernel::new(KernelSpec::besov_sobolev_disk(0.5, 1.0, 0.0, 16)).is_err());
    }
}
