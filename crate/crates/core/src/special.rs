//! Log-gamma ratios and Gauss rules used by the radial quadratures.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// `ln|Γ(x)|` together with the sign of `Γ(x)`.
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    let (v, s) = libm::lgamma_r(x);
    (v, if s < 0 { -1.0 } else { 1.0 })
}

/// `Γ(a)Γ(b) / (Γ(c)Γ(d))` evaluated in log space.
///
/// Fails when any argument sits on a pole of Γ.
pub fn gamma_ratio(a: f64, b: f64, c: f64, d: f64) -> Result<f64> {
    for x in [a, b, c, d] {
        if x <= 0.0 && x == x.floor() {
            return Err(Error::InvalidParameter(format!("Gamma pole at argument {x}")));
        }
    }
    let (la, sa) = ln_gamma_signed(a);
    let (lb, sb) = ln_gamma_signed(b);
    let (lc, sc) = ln_gamma_signed(c);
    let (ld, sd) = ln_gamma_signed(d);
    Ok(sa * sb * sc * sd * (la + lb - lc - ld).exp())
}

/// A one-dimensional quadrature rule.
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Affine map of a rule on `[-1, 1]` onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> Rule {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        Rule {
            nodes: self.nodes.iter().map(|x| mid + half * x).collect(),
            weights: self.weights.iter().map(|w| w * half).collect(),
        }
    }
}

/// Gauss–Legendre rule on `[-1, 1]` by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> Rule {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Rule { nodes, weights }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { p0 } else { p1 };
    let dp = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, dp)
}

/// Gauss rule on `[0, 1]` for the weight `(1 - s)^alpha`, `alpha > -1`,
/// built from the Jacobi matrix (Golub–Welsch).
pub fn gauss_jacobi_unit(n: usize, alpha: f64) -> Result<Rule> {
    if alpha <= -1.0 || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("Jacobi weight exponent {alpha} must exceed -1")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("empty Gauss rule".into()));
    }
    let (a, b) = (alpha, 0.0_f64);
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        jac[(k, k)] = if k == 0 { (b - a) / (a + b + 2.0) } else { (b * b - a * a) / (s * (s + 2.0)) };
        if k >= 1 {
            let num = 4.0 * kf * (kf + a) * (kf + b) * (kf + a + b);
            let den = s * s * (s + 1.0) * (s - 1.0);
            let off = (num / den).sqrt();
            jac[(k, k - 1)] = off;
            jac[(k - 1, k)] = off;
        }
    }
    let eig = SymmetricEigen::new(jac);
    let mu0 = 2f64.powf(a + b + 1.0) * gamma_ratio(a + 1.0, b + 1.0, a + b + 2.0, 1.0)?;
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    // x in [-1,1] -> s = (x+1)/2, (1-x)^a dx = 2^(a+1) (1-s)^a ds
    let scale = 2f64.powf(a + 1.0);
    Ok(Rule {
        nodes: pairs.iter().map(|p| 0.5 * (p.0 + 1.0)).collect(),
        weights: pairs.iter().map(|p| p.1 / scale).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        let r = gauss_legendre(12);
        for k in 0..24 {
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            let got = r.integrate(|x| x.powi(k));
            assert!((got - exact).abs() < 1e-14, "k={k}: {got} vs {exact}");
        }
    }

    #[test]
    fn jacobi_reproduces_beta_integrals() {
        for &alpha in &[0.0, 0.5, -0.5, 2.3] {
            let r = gauss_jacobi_unit(20, alpha).unwrap();
            for k in 0..39 {
                // ∫ s^k (1-s)^alpha ds = B(k+1, alpha+1)
                let exact = gamma_ratio(k as f64 + 1.0, alpha + 1.0, k as f64 + alpha + 2.0, 1.0).unwrap();
                let got = r.integrate(|s| s.powi(k));
                assert!(((got - exact) / exact).abs() < 1e-11, "alpha={alpha} k={k}: {got} vs {exact}");
            }
        }
    }

    #[test]
    fn gamma_ratio_matches_factorials() {
        // Γ(5)Γ(3)/(Γ(4)Γ(2)) = 24*2/(6*1) = 8
        assert!((gamma_ratio(5.0, 3.0, 4.0, 2.0).unwrap() - 8.0).abs() < 1e-12);
        // sign through negative arguments: Γ(-0.5) = -2√π
        let r = gamma_ratio(-0.5, 1.0, 0.5, 1.0).unwrap();
        assert!((r + 2.0).abs() < 1e-12);
        assert!(gamma_ratio(-1.0, 1.0, 1.0, 1.0).is_err());
    }
}
