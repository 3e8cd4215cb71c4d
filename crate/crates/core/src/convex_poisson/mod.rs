//! Convex shifted norms and minimum-norm Bezout solves on a finite set.
//!
//! With `D_m = diag(k̃_{a_m}(x_i))` and `G⁺` the regularized inverse Gram
//! matrix, the squared `H^{a,θ}` norm of sampled values `g` is
//! `g* Q_θ g` where `Q_θ = θ₀ G⁺ + Σ_m θ_m D_m* G⁺ D_m`.

mod lp;
mod saddle;

pub use saddle::{grid_scan, random_competitors, saddle_value, SaddleOptions, SaddleReport};

use nalgebra::LU;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{ComplexPoint, KernelSpec, PointSet, C64};
use crate::linalg::{CMat, CVec, RegularizedInverse};
use crate::rkhs::{build_gram, guard_nonvanishing, min_norm_interpolation, shifted_norm, GramMatrix, SampleFunction};

/// Base points `a_1..a_M` and simplex weights `θ_0..θ_M`; index 0 is the
/// unshifted norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftConfig {
    pub base_points: Vec<ComplexPoint>,
    pub theta: Vec<f64>,
}

pub const SIMPLEX_TOL: f64 = 1e-9;

impl ShiftConfig {
    pub fn unshifted() -> Self {
        Self { base_points: Vec::new(), theta: vec![1.0] }
    }

    pub fn vertex(base_points: Vec<ComplexPoint>, m: usize) -> Self {
        let mut theta = vec![0.0; base_points.len() + 1];
        theta[m] = 1.0;
        Self { base_points, theta }
    }

    pub fn validate(&self) -> Result<()> {
        check_simplex(&self.theta, self.base_points.len())
    }
}

pub fn check_simplex(theta: &[f64], m: usize) -> Result<()> {
    if theta.len() != m + 1 {
        return Err(Error::InvalidParameter(format!("{} weights for {m} base points (need {})", theta.len(), m + 1)));
    }
    let sum: f64 = theta.iter().sum();
    if theta.iter().any(|&t| !(-SIMPLEX_TOL..=1.0 + SIMPLEX_TOL).contains(&t)) || (sum - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::InvalidParameter(format!("theta {theta:?} is not in the simplex")));
    }
    Ok(())
}

/// The quadratic forms `Q_0 .. Q_M` for a fixed Gram matrix and base points.
#[derive(Debug, Clone)]
pub struct ConvexForms {
    pub forms: Vec<CMat>,
    inverse: RegularizedInverse,
    /// `k̃_{a_m}(x_i)` per base point; `Q_m = D_m* G⁺ D_m`.
    scales: Vec<Vec<C64>>,
}

impl ConvexForms {
    pub fn new(g: &GramMatrix, base_points: &[ComplexPoint]) -> Result<Self> {
        if !g.duplicates.is_empty() {
            return Err(Error::InvalidParameter("Bezout solves need distinct sample points".into()));
        }
        let inverse = RegularizedInverse::new(&g.entries, g.config.tikhonov_rel)?;
        let ginv = inverse.matrix();
        let mut forms = vec![ginv.clone()];
        let mut scales = Vec::with_capacity(base_points.len());
        for a in base_points {
            let d = g.normalized_kernel_values(a)?;
            guard_nonvanishing(&d)?;
            forms.push(CMat::from_fn(g.len(), g.len(), |i, j| d[i].conj() * ginv[(i, j)] * d[j]));
            scales.push(d);
        }
        Ok(Self { forms, inverse, scales })
    }

    pub fn combine(&self, theta: &[f64]) -> CMat {
        let n = self.forms[0].nrows();
        let mut q = CMat::zeros(n, n);
        for (f, &t) in self.forms.iter().zip(theta) {
            if t != 0.0 {
                q += f * C64::new(t, 0.0);
            }
        }
        q
    }

    /// `v* Q_m v`, evaluated through the eigendecomposition of `G` rather
    /// than the dense form so that it agrees with the interpolation norms.
    pub fn quad(&self, m: usize, v: &[C64]) -> f64 {
        let w = match m {
            0 => CVec::from_column_slice(v),
            _ => CVec::from_iterator(v.len(), v.iter().zip(&self.scales[m - 1]).map(|(x, d)| x * d)),
        };
        self.inverse.quad(&w)
    }

    /// `F_m(g) = Σ_ℓ g_ℓ* Q_m g_ℓ` for every `m`.
    pub fn components(&self, g: &SampleFunction) -> Vec<f64> {
        (0..self.forms.len()).map(|m| g.channels.iter().map(|c| self.quad(m, c)).sum()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexNorm {
    pub value: f64,
    /// Squared norms `‖f‖²_H, ‖f‖²_{H^{a_1}}, ...` entering the combination.
    pub components: Vec<f64>,
}

/// `‖f‖²_{H^{a,θ}} = θ₀‖f‖²_H + Σ θ_m ‖f‖²_{H^{a_m}}`.
pub fn convex_shift_norm(g: &GramMatrix, shift: &ShiftConfig, f: &SampleFunction) -> Result<ConvexNorm> {
    shift.validate()?;
    let mut components = vec![min_norm_interpolation(g, f)?.value.powi(2)];
    for a in &shift.base_points {
        components.push(shifted_norm(g, a, f)?.value.powi(2));
    }
    let sq: f64 = components.iter().zip(&shift.theta).map(|(c, t)| c * t).sum();
    Ok(ConvexNorm { value: sq.max(0.0).sqrt(), components })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BezoutProblem {
    pub spec: KernelSpec,
    pub pts: PointSet,
    pub phi: SampleFunction,
    pub rhs: SampleFunction,
    pub shift: ShiftConfig,
    pub lower_bound_c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BezoutSolution {
    pub g: SampleFunction,
    pub norm: f64,
    pub residual: f64,
    pub per_channel_norms: Vec<f64>,
}

/// Minimum convex-shifted-norm solutions of `Σ_ℓ φ_ℓ g_ℓ = rhs` on the
/// sample points, for any `θ` over fixed base points.
#[derive(Debug, Clone)]
pub struct BezoutSolver {
    pub forms: ConvexForms,
    phi: SampleFunction,
    rhs: Vec<C64>,
}

impl BezoutSolver {
    pub fn new(
        g: &GramMatrix,
        phi: &SampleFunction,
        rhs: &SampleFunction,
        base_points: &[ComplexPoint],
        lower_bound_c: f64,
    ) -> Result<Self> {
        phi.check_len(g.len())?;
        rhs.check_len(g.len())?;
        if rhs.num_channels() != 1 {
            return Err(Error::InvalidParameter("right-hand side must be scalar".into()));
        }
        check_lower_bound(phi, lower_bound_c)?;
        Ok(Self { forms: ConvexForms::new(g, base_points)?, phi: phi.clone(), rhs: rhs.channels[0].clone() })
    }

    pub fn num_shifts(&self) -> usize {
        self.forms.forms.len() - 1
    }

    pub fn phi(&self) -> &SampleFunction {
        &self.phi
    }

    /// `sup_i |Σ_ℓ φ_ℓ(x_i) g_ℓ(x_i) − rhs_i|`.
    pub fn residual(&self, g: &SampleFunction) -> f64 {
        bezout_residual(&self.phi, g, &self.rhs)
    }

    /// Solve the stationarity system
    /// `[[Q, A*], [A, 0]] [g; λ] = [0; rhs]`, `A = [Φ_1 … Φ_N]`.
    pub fn solve(&self, theta: &[f64]) -> Result<BezoutSolution> {
        check_simplex(theta, self.num_shifts())?;
        let q = self.forms.combine(theta);
        let n = q.nrows();
        let channels = self.phi.num_channels();
        let size = (channels + 1) * n;
        let mut kkt = CMat::zeros(size, size);
        for l in 0..channels {
            kkt.view_mut((l * n, l * n), (n, n)).copy_from(&q);
            for i in 0..n {
                let p = self.phi.channels[l][i];
                kkt[(channels * n + i, l * n + i)] = p;
                kkt[(l * n + i, channels * n + i)] = p.conj();
            }
        }
        let mut b = CVec::zeros(size);
        for i in 0..n {
            b[channels * n + i] = self.rhs[i];
        }
        let lu = LU::new(kkt.clone());
        let mut x = lu.solve(&b).ok_or_else(|| Error::Numerical("singular KKT system".into()))?;
        // one step of iterative refinement
        let r = &b - &kkt * &x;
        if let Some(dx) = lu.solve(&r) {
            x += dx;
        }
        if x.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Numerical("KKT solve produced non-finite values".into()));
        }
        let g = SampleFunction::vector((0..channels).map(|l| x.rows(l * n, n).iter().copied().collect()).collect());
        Ok(self.finish(g, theta))
    }

    fn finish(&self, g: SampleFunction, theta: &[f64]) -> BezoutSolution {
        let per_channel_norms: Vec<f64> = g
            .channels
            .iter()
            .map(|c| {
                theta
                    .iter()
                    .enumerate()
                    .filter(|(_, t)| **t != 0.0)
                    .map(|(m, t)| t * self.forms.quad(m, c))
                    .sum::<f64>()
            })
            .map(|v| v.max(0.0).sqrt())
            .collect();
        let norm = per_channel_norms.iter().map(|v| v * v).sum::<f64>().sqrt();
        BezoutSolution { residual: self.residual(&g), g, norm, per_channel_norms }
    }
}

pub fn bezout_residual(phi: &SampleFunction, g: &SampleFunction, rhs: &[C64]) -> f64 {
    (0..rhs.len())
        .map(|i| {
            let s: C64 = phi.channels.iter().zip(&g.channels).map(|(p, v)| p[i] * v[i]).sum();
            (s - rhs[i]).norm()
        })
        .fold(0.0, f64::max)
}

fn check_lower_bound(phi: &SampleFunction, c: f64) -> Result<()> {
    if !(c >= 0.0) {
        return Err(Error::InvalidParameter(format!("lower bound c = {c} must be nonnegative")));
    }
    for i in 0..phi.len() {
        let m = phi.channels.iter().map(|ch| ch[i].norm()).fold(0.0, f64::max);
        if m == 0.0 || m < c {
            return Err(Error::Infeasible(format!("max_l |phi_l| = {m} at sample {i} is below the lower bound {c}")));
        }
    }
    Ok(())
}

pub fn solve_bezout_min_norm(prob: &BezoutProblem) -> Result<BezoutSolution> {
    let g = build_gram(&prob.spec, &prob.pts)?;
    prob.shift.validate()?;
    BezoutSolver::new(&g, &prob.phi, &prob.rhs, &prob.shift.base_points, prob.lower_bound_c)?.solve(&prob.shift.theta)
}

/// Turn a solution of `φ·f = k̃_a` into one of `φ·g = 1` by `g = f / k̃_a`;
/// the returned norm is the `H^a` norm of `g`, which equals `‖f‖_H`.
pub fn divide_by_kernel(
    g: &GramMatrix,
    phi: &SampleFunction,
    a: &ComplexPoint,
    f: &BezoutSolution,
) -> Result<BezoutSolution> {
    let d = g.normalized_kernel_values(a)?;
    guard_nonvanishing(&d)?;
    let inv: Vec<C64> = d.iter().map(|v| v.inv()).collect();
    let quotient = f.g.times(&inv);
    let per_channel_norms = quotient
        .channels
        .iter()
        .map(|c| Ok(shifted_norm(g, a, &SampleFunction::scalar(c.clone()))?.value))
        .collect::<Result<Vec<f64>>>()?;
    let norm = per_channel_norms.iter().map(|v| v * v).sum::<f64>().sqrt();
    let residual = bezout_residual(phi, &quotient, &vec![C64::new(1.0, 0.0); g.len()]);
    Ok(BezoutSolution { g: quotient, norm, residual, per_channel_norms })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn setup() -> (GramMatrix, Vec<C64>) {
        let pts = vec![c(0.0, 0.0), c(0.5, 0.0), c(-0.5, 0.0), c(0.0, 0.5)];
        let g = build_gram(&KernelSpec::szego_disk(), &PointSet::disk(pts.clone()).unwrap()).unwrap();
        (g, pts)
    }

    #[test]
    fn trivial_unit_problem() {
        let (g, pts) = setup();
        let one = SampleFunction::constant(4, c(1.0, 0.0));
        let base = vec![ComplexPoint::scalar(pts[1]), ComplexPoint::scalar(pts[3])];
        let solver = BezoutSolver::new(&g, &one, &one, &base, 0.5).unwrap();
        let s = solver.solve(&[0.2, 0.5, 0.3]).unwrap();
        assert!((s.norm - 1.0).abs() < 1e-10, "{}", s.norm);
        for v in &s.g.channels[0] {
            assert!((v - 1.0).norm() < 1e-9);
        }
    }

    #[test]
    fn unconstrained_channel_is_zero() {
        let (g, pts) = setup();
        let phi = SampleFunction::vector(vec![vec![c(1.0, 0.0); 4], vec![c(0.0, 0.0); 4]]);
        let rhs = SampleFunction::scalar(pts.iter().map(|z| z * z + 0.3).collect());
        let s = BezoutSolver::new(&g, &phi, &rhs, &[], 0.0).unwrap().solve(&[1.0]).unwrap();
        assert!(s.g.channels[1].iter().all(|v| v.norm() < 1e-12));
        let want = min_norm_interpolation(&g, &rhs).unwrap().value;
        assert!((s.norm - want).abs() < 1e-10);
    }

    #[test]
    fn vanishing_tuple_is_infeasible() {
        let (g, _) = setup();
        let mut phi = SampleFunction::constant(4, c(1.0, 0.0));
        phi.channels[0][2] = c(0.0, 0.0);
        let one = SampleFunction::constant(4, c(1.0, 0.0));
        assert!(matches!(BezoutSolver::new(&g, &phi, &one, &[], 0.0), Err(Error::Infeasible(_))));
    }

    #[test]
    fn simplex_validation() {
        assert!(check_simplex(&[0.5, 0.5], 1).is_ok());
        assert!(check_simplex(&[0.7, 0.5], 1).is_err());
        assert!(check_simplex(&[1.2, -0.2], 1).is_err());
        assert!(check_simplex(&[1.0], 1).is_err());
    }
}
