//! Finite minimax `sup_θ inf_g F(θ, g)` with `F(θ, g) = Σ θ_m F_m(g)`.
//!
//! `V(θ) = inf_g F(θ, g)` is concave, and the minimizer `g*` at `θ` gives
//! the supergradient `(F_m(g*))_m` with `V(θ) = s·θ`. Every evaluated `g*`
//! also yields an upper bound `max_m F_m(g*)` on the saddle value, so each
//! run certifies itself from both sides.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lp::maximize;
use super::{BezoutSolution, BezoutSolver, ShiftConfig};
use crate::error::Result;
use crate::kernels::{ComplexPoint, C64};
use crate::rkhs::SampleFunction;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SaddleOptions {
    pub ascent_iters: usize,
    pub max_cuts: usize,
    /// Stop once `lp_upper − value ≤ gap_tol · max(1, value)`.
    pub gap_tol: f64,
}

impl Default for SaddleOptions {
    fn default() -> Self {
        Self { ascent_iters: 30, max_cuts: 400, gap_tol: 1e-11 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaddleReport {
    /// `max_θ V(θ)` found.
    pub value: f64,
    pub theta_star: ShiftConfig,
    pub g_star: BezoutSolution,
    /// Cutting-plane bound `max_θ min_j s_j·θ ≥ sup V`.
    pub lp_upper: f64,
    /// `min_j max_m F_m(g_j)`, the inf-sup over evaluated solutions.
    pub minimax_upper: f64,
    pub gap: f64,
    pub evaluations: usize,
    pub converged: bool,
}

struct Cut {
    theta: Vec<f64>,
    value: f64,
    slope: Vec<f64>,
    solution: BezoutSolution,
}

fn evaluate(solver: &BezoutSolver, theta: &[f64]) -> Result<Cut> {
    let solution = solver.solve(theta)?;
    let slope = solver.forms.components(&solution.g);
    let value = slope.iter().zip(theta).map(|(s, t)| s * t).sum();
    Ok(Cut { theta: theta.to_vec(), value, slope, solution })
}

/// Euclidean projection onto the probability simplex (sort-based).
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut tau = 0.0;
    for (i, &x) in u.iter().enumerate() {
        cum += x;
        let t = (cum - 1.0) / (i as f64 + 1.0);
        if x - t > 0.0 {
            tau = t;
        }
    }
    v.iter().map(|&x| (x - tau).max(0.0)).collect()
}

fn better(a: &Cut, b: &Cut) -> bool {
    a.value > b.value || (a.value == b.value && a.theta < b.theta)
}

/// Maximize `V` over the simplex: projected supergradient ascent with
/// steps `1/(k+1)`, then Kelley cutting planes until the LP bound meets the
/// best value.
pub fn saddle_value(solver: &BezoutSolver, base_points: &[ComplexPoint], opts: &SaddleOptions) -> Result<SaddleReport> {
    let dim = solver.num_shifts() + 1;
    let mut cuts: Vec<Cut> = (0..dim)
        .into_par_iter()
        .map(|m| {
            let mut e = vec![0.0; dim];
            e[m] = 1.0;
            evaluate(solver, &e)
        })
        .collect::<Result<_>>()?;

    if dim > 1 {
        let mut theta = vec![1.0 / dim as f64; dim];
        for k in 0..opts.ascent_iters {
            let cut = evaluate(solver, &theta)?;
            let norm = cut.slope.iter().map(|s| s * s).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
            let step = 1.0 / (k as f64 + 1.0);
            let moved: Vec<f64> = theta.iter().zip(&cut.slope).map(|(t, s)| t + step * s / norm).collect();
            cuts.push(cut);
            theta = project_simplex(&moved);
        }
    }

    let mut lp_upper = f64::INFINITY;
    let mut converged = dim == 1;
    while !converged && cuts.len() < opts.max_cuts {
        // max t  s.t.  t − s_j·θ ≤ 0,  Σθ ≤ 1; slopes are ≥ 0 so Σθ = 1 at the optimum
        let mut c = vec![0.0; dim + 1];
        c[dim] = 1.0;
        let mut rows: Vec<Vec<f64>> = cuts
            .iter()
            .map(|cut| {
                let mut r: Vec<f64> = cut.slope.iter().map(|s| -s.max(0.0)).collect();
                r.push(1.0);
                r
            })
            .collect();
        let mut simplex_row = vec![1.0; dim];
        simplex_row.push(0.0);
        rows.push(simplex_row);
        let mut b = vec![0.0; cuts.len()];
        b.push(1.0);
        let lp = maximize(&c, &rows, &b)?;
        lp_upper = lp_upper.min(lp.value);
        let best = cuts.iter().map(|c| c.value).fold(f64::NEG_INFINITY, f64::max);
        if lp_upper - best <= opts.gap_tol * best.abs().max(1.0) {
            converged = true;
            break;
        }
        let mut theta: Vec<f64> = lp.x[..dim].to_vec();
        let s: f64 = theta.iter().sum();
        if s > 0.0 {
            theta.iter_mut().for_each(|t| *t /= s);
        } else {
            theta = vec![1.0 / dim as f64; dim];
        }
        cuts.push(evaluate(solver, &theta)?);
    }

    let evaluations = cuts.len();
    let minimax_upper =
        cuts.iter().map(|c| c.slope.iter().copied().fold(f64::NEG_INFINITY, f64::max)).fold(f64::INFINITY, f64::min);
    let mut best_idx = 0;
    for i in 1..cuts.len() {
        if better(&cuts[i], &cuts[best_idx]) {
            best_idx = i;
        }
    }
    let best = cuts.swap_remove(best_idx);
    if dim == 1 {
        lp_upper = best.value;
    }
    Ok(SaddleReport {
        value: best.value,
        gap: (lp_upper.min(minimax_upper) - best.value).max(0.0),
        lp_upper,
        minimax_upper,
        theta_star: ShiftConfig { base_points: base_points.to_vec(), theta: best.theta },
        g_star: best.solution,
        evaluations,
        converged,
    })
}

/// Exhaustive scan of `V` over the simplex lattice `{θ : θ_m ∈ ℤ/res}`.
pub fn grid_scan(solver: &BezoutSolver, resolution: usize) -> Result<(f64, Vec<f64>)> {
    let dim = solver.num_shifts() + 1;
    let mut lattice = Vec::new();
    let mut cur = vec![0usize; dim];
    compositions(resolution, 0, &mut cur, &mut lattice);
    let values: Vec<(f64, Vec<f64>)> = lattice
        .par_iter()
        .map(|parts| {
            let theta: Vec<f64> = parts.iter().map(|&p| p as f64 / resolution as f64).collect();
            let s = solver.solve(&theta)?;
            Ok((s.norm * s.norm, theta))
        })
        .collect::<Result<_>>()?;
    Ok(values.into_iter().fold((f64::NEG_INFINITY, Vec::new()), |acc, v| if v.0 > acc.0 { v } else { acc }))
}

/// `max_m F_m(g)` for random feasible `g = g* + d`, where each `d(x_i)`
/// is a uniform random vector projected onto `{d : Σ_ℓ φ_ℓ(x_i) d_ℓ = 0}`.
/// Weak duality says every value is at least the saddle value.
pub fn random_competitors(solver: &BezoutSolver, g_star: &SampleFunction, count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phi = solver.phi();
    let (channels, n) = (phi.num_channels(), phi.len());
    (0..count)
        .map(|t| {
            let scale = 10f64.powi(-((t % 4) as i32));
            let mut g = g_star.clone();
            for i in 0..n {
                let mut d: Vec<C64> =
                    (0..channels).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
                let p: Vec<C64> = (0..channels).map(|l| phi.channels[l][i]).collect();
                let pp: f64 = p.iter().map(|v| v.norm_sqr()).sum();
                let pd: C64 = p.iter().zip(&d).map(|(a, b)| a * b).sum();
                for (dl, pl) in d.iter_mut().zip(&p) {
                    *dl -= pl.conj() * pd / pp;
                }
                for (l, dl) in d.into_iter().enumerate() {
                    g.channels[l][i] += dl * scale;
                }
            }
            solver.forms.components(&g).into_iter().fold(f64::NEG_INFINITY, f64::max)
        })
        .collect()
}

fn compositions(left: usize, idx: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if idx + 1 == cur.len() {
        cur[idx] = left;
        out.push(cur.clone());
        return;
    }
    for k in 0..=left {
        cur[idx] = k;
        compositions(left - k, idx + 1, cur, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_lands_in_simplex() {
        let p = project_simplex(&[0.9, 0.8, -0.3]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!((p[0] - 0.55).abs() < 1e-14 && (p[1] - 0.45).abs() < 1e-14 && p[2] == 0.0);
        assert_eq!(project_simplex(&[0.2, 0.8]), vec![0.2, 0.8]);
    }

    #[test]
    fn lattice_size() {
        let mut out = Vec::new();
        compositions(4, 0, &mut vec![0; 3], &mut out);
        assert_eq!(out.len(), 15);
    }
}
