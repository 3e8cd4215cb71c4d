//! Finite-point-set RKHS geometry.
//!
//! Everything here is the restriction of the Hilbert-space picture to the
//! span of `{k_{x_i}}`: minimum-norm interpolants stand in for functions and
//! compressions of multiplication operators stand in for multipliers. All
//! returned norms are lower bounds for their infinite-dimensional versions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::NumericConfig;
use crate::error::{Error, Result};
use crate::kernels::{ComplexPoint, Kernel, KernelSpec, PointSet, C64};
use crate::linalg::{check_psd, max_eigenpair, range_whitener, CMat, CVec, RegularizedInverse};

/// Values of `N` functions on a point set, stored channel by channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleFunction {
    pub channels: Vec<Vec<C64>>,
}

impl SampleFunction {
    pub fn scalar(values: Vec<C64>) -> Self {
        Self { channels: vec![values] }
    }

    pub fn vector(channels: Vec<Vec<C64>>) -> Self {
        Self { channels }
    }

    pub fn constant(len: usize, c: C64) -> Self {
        Self::scalar(vec![c; len])
    }

    /// Sample `f` at each point, one channel.
    pub fn from_fn(pts: &PointSet, f: impl Fn(&ComplexPoint) -> C64) -> Self {
        Self::scalar(pts.points.iter().map(f).collect())
    }

    pub fn num_channels(&self) -> usize {
        self.channels.len()
    }

    pub fn len(&self) -> usize {
        self.channels.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn channel(&self, l: usize) -> &[C64] {
        &self.channels[l]
    }

    /// Pointwise product of every channel with `w`.
    pub fn times(&self, w: &[C64]) -> SampleFunction {
        SampleFunction {
            channels: self.channels.iter().map(|c| c.iter().zip(w).map(|(a, b)| a * b).collect()).collect(),
        }
    }

    pub fn check_len(&self, n: usize) -> Result<()> {
        if self.channels.is_empty() {
            return Err(Error::InvalidParameter("sample function has no channels".into()));
        }
        for (l, c) in self.channels.iter().enumerate() {
            if c.len() != n {
                return Err(Error::InvalidParameter(format!("channel {l} has {} values for {n} points", c.len())));
            }
        }
        Ok(())
    }

    pub fn sup_norm(&self) -> f64 {
        self.channels.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    /// Coefficients `c = G⁺ v` per channel; `value² = Σ_ℓ Re(v_ℓ* c_ℓ)`.
    Interpolation,
    /// Kernel-span coefficients `c` of a maximizing vector for
    /// `c*(ΦGΦ*)c / c*Gc`, channels stacked.
    Rayleigh,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub value: f64,
    pub kind: CertificateKind,
    pub certificate: Vec<Vec<C64>>,
    /// Eigenvalue floor used by the regularized inverse.
    pub regularization: f64,
}

/// Gram matrix `G_ij = k(x_i, x_j)` of a point set.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    pub kernel: Kernel,
    pub points: PointSet,
    pub entries: CMat,
    pub min_eig: f64,
    pub max_eig: f64,
    /// Index pairs `(i, j)`, `i < j`, of coincident points.
    pub duplicates: Vec<(usize, usize)>,
    pub config: NumericConfig,
}

pub fn build_gram(spec: &KernelSpec, pts: &PointSet) -> Result<GramMatrix> {
    build_gram_with(&Kernel::new(*spec)?, pts, &NumericConfig::default())
}

pub fn build_gram_with(kernel: &Kernel, pts: &PointSet, config: &NumericConfig) -> Result<GramMatrix> {
    if !pts.domain.same_set(&kernel.domain()) {
        return Err(Error::InvalidParameter(format!(
            "point set domain {:?} does not match kernel domain {:?}",
            pts.domain,
            kernel.domain()
        )));
    }
    for p in &pts.points {
        kernel.check(p)?;
    }
    let n = pts.len();
    let rows: Vec<Vec<C64>> = (0..n)
        .into_par_iter()
        .map(|i| (0..n).map(|j| kernel.eval_unchecked(&pts.points[i], &pts.points[j])).collect())
        .collect();
    let entries = CMat::from_fn(n, n, |i, j| rows[i][j]);
    let (min_eig, max_eig) = check_psd(&entries, config.psd_tol)?;
    let mut duplicates = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if pts.points[i].distance(&pts.points[j]) <= config.duplicate_tol {
                duplicates.push((i, j));
            }
        }
    }
    Ok(GramMatrix {
        kernel: kernel.clone(),
        points: pts.clone(),
        entries,
        min_eig,
        max_eig,
        duplicates,
        config: *config,
    })
}

impl GramMatrix {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// First index of each class of coincident points.
    fn representatives(&self) -> Vec<usize> {
        let mut rep: Vec<usize> = (0..self.len()).collect();
        for &(i, j) in &self.duplicates {
            if rep[j] == j {
                rep[j] = rep[i];
            }
        }
        rep
    }

    /// `k̃_a(x_i)` for every sample point.
    pub fn normalized_kernel_values(&self, a: &ComplexPoint) -> Result<Vec<C64>> {
        self.kernel.check(a)?;
        Ok(self.points.points.iter().map(|x| self.kernel.normalized_unchecked(a, x)).collect())
    }

    /// `G^a_ij = G_ij / (k̃_a(x_i) conj(k̃_a(x_j)))`, the Gram matrix of
    /// the shifted space `H^a`.
    pub fn shifted(&self, a: &ComplexPoint) -> Result<CMat> {
        let d = self.normalized_kernel_values(a)?;
        guard_nonvanishing(&d)?;
        Ok(CMat::from_fn(self.len(), self.len(), |i, j| self.entries[(i, j)] / (d[i] * d[j].conj())))
    }
}

pub(crate) fn guard_nonvanishing(d: &[C64]) -> Result<()> {
    if let Some(i) = d.iter().position(|v| v.norm() < 1e-300 || !v.re.is_finite()) {
        return Err(Error::Numerical(format!("normalized kernel vanishes at sample {i}")));
    }
    Ok(())
}

/// Interpolation data with coincident points merged.
struct Reduced {
    keep: Vec<usize>,
    inverse: RegularizedInverse,
}

fn reduce(g: &GramMatrix) -> Result<Reduced> {
    let rep = g.representatives();
    let keep: Vec<usize> = (0..g.len()).filter(|&i| rep[i] == i).collect();
    let sub = CMat::from_fn(keep.len(), keep.len(), |i, j| g.entries[(keep[i], keep[j])]);
    let inverse = RegularizedInverse::new(&sub, g.config.tikhonov_rel)?;
    Ok(Reduced { keep, inverse })
}

fn merged_channel(g: &GramMatrix, values: &[C64], keep: &[usize]) -> Result<CVec> {
    let scale = 1.0 + values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    for &(i, j) in &g.duplicates {
        if (values[i] - values[j]).norm() > g.config.duplicate_tol * scale {
            return Err(Error::Infeasible(format!(
                "points {i} and {j} coincide but carry values {} and {}",
                values[i], values[j]
            )));
        }
    }
    Ok(CVec::from_iterator(keep.len(), keep.iter().map(|&i| values[i])))
}

/// Minimum `H`-norm over all extensions of the samples `v` (all channels
/// summed in square).
pub fn min_norm_interpolation(g: &GramMatrix, v: &SampleFunction) -> Result<NormReport> {
    v.check_len(g.len())?;
    if g.is_empty() {
        return Ok(NormReport {
            value: 0.0,
            kind: CertificateKind::Interpolation,
            certificate: vec![Vec::new(); v.num_channels()],
            regularization: 0.0,
        });
    }
    let red = reduce(g)?;
    let mut total = 0.0;
    let mut certificate = Vec::with_capacity(v.num_channels());
    for ch in &v.channels {
        let vv = merged_channel(g, ch, &red.keep)?;
        let c = red.inverse.solve(&vv);
        total += red.inverse.quad(&vv);
        certificate.push(c.iter().copied().collect());
    }
    Ok(NormReport {
        value: total.sqrt(),
        kind: CertificateKind::Interpolation,
        certificate,
        regularization: red.inverse.eps(),
    })
}

/// `⟨interp(u), interp(v)⟩_H = v* G⁺ u` for scalar samples.
pub fn interpolant_inner(g: &GramMatrix, u: &[C64], v: &[C64]) -> Result<C64> {
    let red = reduce(g)?;
    let uu = merged_channel(g, u, &red.keep)?;
    let vv = merged_channel(g, v, &red.keep)?;
    Ok(red.inverse.inner(&uu, &vv))
}

/// `‖f‖_{H^a} = ‖k̃_a f‖_H` restricted to the sample points.
pub fn shifted_norm(g: &GramMatrix, a: &ComplexPoint, f: &SampleFunction) -> Result<NormReport> {
    f.check_len(g.len())?;
    let d = g.normalized_kernel_values(a)?;
    guard_nonvanishing(&d)?;
    min_norm_interpolation(g, &f.times(&d))
}

fn diag_scale(m: &CMat, phi: &[C64]) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| phi[i] * m[(i, j)] * phi[j].conj())
}

/// Largest generalized eigenvalue of `(ΦGΦ*, G)` on the range of `G`,
/// generalized to a block pencil when several channel pairs are supplied.
fn pencil_max(gram: &CMat, blocks: &[Vec<CMat>], cutoff: f64) -> (f64, Vec<Vec<C64>>) {
    let w = range_whitener(gram, cutoff);
    let r = w.ncols();
    let nb = blocks.len();
    if r == 0 {
        return (0.0, vec![Vec::new(); nb]);
    }
    let mut big = CMat::zeros(nb * r, nb * r);
    for (l, row) in blocks.iter().enumerate() {
        for (m, block) in row.iter().enumerate() {
            let b = w.adjoint() * block * &w;
            big.view_mut((l * r, m * r), (r, r)).copy_from(&b);
        }
    }
    let (lambda, vec) = max_eigenpair(&big);
    let cert = (0..nb)
        .map(|l| {
            let y = vec.rows(l * r, r).into_owned();
            (&w * y).iter().copied().collect()
        })
        .collect();
    (lambda.max(0.0), cert)
}

/// Restricted multiplier norm with respect to an arbitrary PSD Gram matrix.
pub fn multiplier_norm_against(gram: &CMat, phi: &[C64], cutoff: f64) -> NormReport {
    let block = diag_scale(gram, phi);
    let (lambda, certificate) = pencil_max(gram, &[vec![block]], cutoff);
    NormReport { value: lambda.sqrt(), kind: CertificateKind::Rayleigh, certificate, regularization: 0.0 }
}

/// Least `B` with `(B² − φ_i conj(φ_j)) G_ij ⪰ 0`.
pub fn restricted_multiplier_norm(g: &GramMatrix, phi: &SampleFunction) -> Result<NormReport> {
    phi.check_len(g.len())?;
    if phi.num_channels() != 1 {
        return Err(Error::InvalidParameter(
            "scalar multiplier norm needs one channel; use restricted_vector_norms".into(),
        ));
    }
    Ok(multiplier_norm_against(&g.entries, phi.channel(0), g.config.range_cutoff_rel))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorNorms {
    pub row: f64,
    pub column: f64,
    pub max: f64,
}

/// Row, column and max norms of a multiplier tuple.
pub fn restricted_vector_norms(g: &GramMatrix, phi: &SampleFunction) -> Result<VectorNorms> {
    phi.check_len(g.len())?;
    let cutoff = g.config.range_cutoff_rel;
    let w = range_whitener(&g.entries, cutoff);
    let whitened: Vec<CMat> = phi
        .channels
        .iter()
        .map(|c| {
            // W* Φ_ℓ G, reused by every block
            let scaled = CMat::from_fn(g.len(), g.len(), |i, j| c[i] * g.entries[(i, j)]);
            w.adjoint() * scaled
        })
        .collect();
    let n = phi.num_channels();
    let r = w.ncols();
    let max = phi.channels.iter().map(|c| multiplier_norm_against(&g.entries, c, cutoff).value).fold(0.0, f64::max);
    if r == 0 {
        return Ok(VectorNorms { row: 0.0, column: 0.0, max });
    }
    // block (ℓ, m) = W* Φ_ℓ G Φ_m* W
    let block = |l: usize, m: usize| -> CMat {
        let right = CMat::from_fn(g.len(), r, |i, j| phi.channels[m][i].conj() * w[(i, j)]);
        &whitened[l] * right
    };
    let mut row = CMat::zeros(r, r);
    let mut col = CMat::zeros(n * r, n * r);
    for l in 0..n {
        for m in 0..n {
            let b = block(l, m);
            if l == m {
                row += &b;
            }
            col.view_mut((l * r, m * r), (r, r)).copy_from(&b);
        }
    }
    Ok(VectorNorms { row: max_eigenpair(&row).0.max(0.0).sqrt(), column: max_eigenpair(&col).0.max(0.0).sqrt(), max })
}

/// Probe-based lower bound for the kernel-multiplier norm
/// `max{‖φ·1‖, sup_a ‖φ k̃_a‖}` (channels summed in square).
pub fn kernel_multiplier_norm_lower(
    g: &GramMatrix,
    phi: &SampleFunction,
    probes: &[ComplexPoint],
) -> Result<NormReport> {
    phi.check_len(g.len())?;
    let mut best = min_norm_interpolation(g, phi)?;
    let reports: Vec<Result<NormReport>> = probes.par_iter().map(|a| shifted_norm(g, a, phi)).collect();
    for r in reports {
        let r = r?;
        if r.value > best.value {
            best = r;
        }
    }
    Ok(best)
}
