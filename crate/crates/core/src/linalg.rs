//! Dense Hermitian helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::kernels::C64;

pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub fn hermitize(m: &CMat) -> CMat {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(hermitize(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Largest eigenvalue of a Hermitian matrix and a unit eigenvector.
pub fn max_eigenpair(m: &CMat) -> (f64, CVec) {
    let (values, vectors) = hermitian_eigen(m);
    match values.last() {
        Some(&v) => (v, vectors.column(values.len() - 1).into_owned()),
        None => (0.0, CVec::zeros(0)),
    }
}

/// Extreme eigenvalues `(min, max)`; fails when `min < -tol * max`.
pub fn check_psd(m: &CMat, tol: f64) -> Result<(f64, f64)> {
    let (values, _) = hermitian_eigen(m);
    let (min, max) = match (values.first(), values.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Ok((0.0, 0.0)),
    };
    if min < -tol * max.abs().max(f64::MIN_POSITIVE) {
        return Err(Error::NotPsd { min, max });
    }
    Ok((min, max))
}

/// Regularized inverse of a PSD matrix.
///
/// Eigenvalues are floored at `eps = rel * trace / dim`. The result
/// dominates the exact pseudo-inverse quadratic form from below and is the
/// exact inverse whenever the spectrum already sits above `eps`.
#[derive(Debug, Clone)]
pub struct RegularizedInverse {
    vectors: CMat,
    inv_values: Vec<f64>,
    eps: f64,
}

impl RegularizedInverse {
    pub fn new(g: &CMat, rel: f64) -> Result<Self> {
        let n = g.nrows();
        if n == 0 {
            return Ok(Self { vectors: CMat::zeros(0, 0), inv_values: Vec::new(), eps: 0.0 });
        }
        let trace: f64 = (0..n).map(|i| g[(i, i)].re).sum();
        if !trace.is_finite() || trace <= 0.0 {
            return Err(Error::Numerical(format!("Gram trace {trace} is not positive")));
        }
        let eps = rel * trace / n as f64;
        let (values, vectors) = hermitian_eigen(g);
        let inv_values = values.iter().map(|&l| 1.0 / l.max(eps)).collect();
        Ok(Self { vectors, inv_values, eps })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn dim(&self) -> usize {
        self.inv_values.len()
    }

    pub fn solve(&self, v: &CVec) -> CVec {
        let mut coef = self.vectors.adjoint() * v;
        for (c, &s) in coef.iter_mut().zip(&self.inv_values) {
            *c *= s;
        }
        &self.vectors * coef
    }

    /// `v* G⁺ u`.
    pub fn inner(&self, u: &CVec, v: &CVec) -> C64 {
        v.dotc(&self.solve(u))
    }

    /// `v* G⁺ v` as a sum of nonnegative terms `|u_k* v|² / λ_k`.
    pub fn quad(&self, v: &CVec) -> f64 {
        let coef = self.vectors.adjoint() * v;
        coef.iter().zip(&self.inv_values).map(|(c, s)| c.norm_sqr() * s).sum()
    }

    /// `G⁺` as a dense matrix.
    pub fn matrix(&self) -> CMat {
        let mut scaled = self.vectors.clone();
        for (j, &s) in self.inv_values.iter().enumerate() {
            scaled.column_mut(j).scale_mut(s);
        }
        &scaled * self.vectors.adjoint()
    }
}

/// `W = U_r Λ_r^{-1/2}` over the numerical range of a PSD matrix, so that
/// `W* G W = I_r`.
pub fn range_whitener(g: &CMat, cutoff_rel: f64) -> CMat {
    let (values, vectors) = hermitian_eigen(g);
    let max = values.last().copied().unwrap_or(0.0);
    if max <= 0.0 {
        return CMat::zeros(g.nrows(), 0);
    }
    let keep: Vec<usize> = (0..values.len()).filter(|&i| values[i] > cutoff_rel * max).collect();
    let mut w = CMat::zeros(g.nrows(), keep.len());
    for (dst, &src) in keep.iter().enumerate() {
        let col = vectors.column(src) * C64::new(1.0 / values[src].sqrt(), 0.0);
        w.set_column(dst, &col);
    }
    w
}
