//! Dense tableau simplex for `max c·x` s.t. `Ax ≤ b`, `x ≥ 0`, `b ≥ 0`.
//!
//! Only the tiny cutting-plane programs of the saddle search go through
//! here, so Bland's rule (no cycling, no tuning) is all we need.

use crate::error::{Error, Result};

pub struct LpSolution {
    pub x: Vec<f64>,
    pub value: f64,
}

pub fn maximize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<LpSolution> {
    let n = c.len();
    let m = a.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidParameter("LP dimensions disagree".into()));
    }
    if b.iter().any(|&v| v < 0.0) {
        return Err(Error::InvalidParameter("LP needs b >= 0".into()));
    }
    let width = n + m + 1;
    // rows 0..m constraints, row m objective (reduced costs, negated)
    let mut t = vec![vec![0.0; width]; m + 1];
    for i in 0..m {
        t[i][..n].copy_from_slice(&a[i]);
        t[i][n + i] = 1.0;
        t[i][width - 1] = b[i];
    }
    for j in 0..n {
        t[m][j] = -c[j];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    const EPS: f64 = 1e-12;
    for _ in 0..10_000 {
        let Some(col) = (0..n + m).find(|&j| t[m][j] < -EPS) else {
            let mut x = vec![0.0; n];
            for (i, &bv) in basis.iter().enumerate() {
                if bv < n {
                    x[bv] = t[i][width - 1];
                }
            }
            return Ok(LpSolution { x, value: t[m][width - 1] });
        };
        let mut pivot: Option<(usize, f64)> = None;
        for i in 0..m {
            if t[i][col] > EPS {
                let ratio = t[i][width - 1] / t[i][col];
                let better = match pivot {
                    None => true,
                    Some((pi, pr)) => ratio < pr - EPS || (ratio <= pr + EPS && basis[i] < basis[pi]),
                };
                if better {
                    pivot = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = pivot else {
            return Err(Error::Numerical("LP is unbounded".into()));
        };
        let p = t[row][col];
        for v in t[row].iter_mut() {
            *v /= p;
        }
        let pivot_row = t[row].clone();
        for (i, r) in t.iter_mut().enumerate() {
            if i != row {
                let f = r[col];
                if f != 0.0 {
                    for (v, pv) in r.iter_mut().zip(&pivot_row) {
                        *v -= f * pv;
                    }
                }
            }
        }
        basis[row] = col;
    }
    Err(Error::Numerical("LP iteration limit".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → (2, 6), 36
        let s = maximize(&[3.0, 5.0], &[vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0]], &[4.0, 12.0, 18.0]).unwrap();
        assert!((s.value - 36.0).abs() < 1e-12);
        assert!((s.x[0] - 2.0).abs() < 1e-12 && (s.x[1] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn matching_pennies() {
        // max t, t ≤ θ₀, t ≤ θ₁, θ₀+θ₁ ≤ 1 → 1/2
        let s = maximize(
            &[0.0, 0.0, 1.0],
            &[vec![-1.0, 0.0, 1.0], vec![0.0, -1.0, 1.0], vec![1.0, 1.0, 0.0]],
            &[0.0, 0.0, 1.0],
        )
        .unwrap();
        assert!((s.value - 0.5).abs() < 1e-12);
    }
}
