//! Sequential minimal optimization for the soft-margin SVM dual
//!
//! ```text
//! max  Σ αᵢ − ½ Σᵢⱼ αᵢ αⱼ yᵢ yⱼ K(xᵢ, xⱼ)
//! s.t. 0 ≤ αᵢ ≤ C,  Σ αᵢ yᵢ = 0
//! ```
//!
//! Each iteration picks the maximal violating pair and solves the
//! two-variable subproblem analytically. The solver tracks
//! `vᵢ = yᵢ − Σⱼ αⱼ yⱼ Kᵢⱼ`, the bias value that would put sample `i` exactly on
//! its margin; optimality holds when `max_{I_up} v − min_{I_low} v ≤ tol`.

use crate::numerics::Matrix;

/// Curvature used when the pair's kernel curvature is not positive.
const MIN_CURVATURE: f64 = 1e-12;

/// Snapshot handed to an observer after every update.
#[derive(Debug)]
pub struct SmoIterate<'a> {
    pub iteration: usize,
    pub alphas: &'a [f64],
    pub dual_objective: f64,
    /// Violation of the pair that was just optimised.
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoSolution {
    pub alphas: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
    pub converged: bool,
    pub dual_objective: f64,
    /// Maximal KKT violation `max_{I_up} v − min_{I_low} v` at exit.
    pub max_violation: f64,
}

/// Solves the dual over a precomputed Gram matrix. `labels` must be ±1.
pub fn smo_solve(
    gram: &Matrix,
    labels: &[f64],
    c: f64,
    tol: f64,
    max_iter: usize,
    mut observer: Option<&mut dyn FnMut(&SmoIterate<'_>)>,
) -> SmoSolution {
    let n = labels.len();
    debug_assert_eq!(gram.shape(), (n, n));
    let mut alphas = vec![0.0; n];
    // α = 0 ⇒ vᵢ = yᵢ.
    let mut v: Vec<f64> = labels.to_vec();
    let mut iterations = 0;
    let (converged, max_violation) = loop {
        let Some((i, j, violation)) = select_pair(&alphas, labels, &v, c) else {
            break (true, 0.0);
        };
        if violation <= tol {
            break (true, violation);
        }
        if iterations >= max_iter {
            break (false, violation);
        }
        iterations += 1;

        let kii = gram[(i, i)];
        let kjj = gram[(j, j)];
        let kij = gram[(i, j)];
        let eta = kii + kjj - 2.0 * kij;
        let eta = if eta > MIN_CURVATURE {
            eta
        } else {
            MIN_CURVATURE
        };

        // αᵢ += yᵢ t, αⱼ −= yⱼ t keeps Σ αy fixed.
        let limit_i = if labels[i] > 0.0 {
            c - alphas[i]
        } else {
            alphas[i]
        };
        let limit_j = if labels[j] > 0.0 {
            alphas[j]
        } else {
            c - alphas[j]
        };
        let t = (violation / eta).min(limit_i).min(limit_j);

        alphas[i] = if t == limit_i {
            if labels[i] > 0.0 {
                c
            } else {
                0.0
            }
        } else {
            alphas[i] + labels[i] * t
        };
        alphas[j] = if t == limit_j {
            if labels[j] > 0.0 {
                0.0
            } else {
                c
            }
        } else {
            alphas[j] - labels[j] * t
        };

        let row_i = gram.row(i);
        let row_j = gram.row(j);
        for ((vk, &ki), &kj) in v.iter_mut().zip(row_i).zip(row_j) {
            *vk -= t * (ki - kj);
        }

        if let Some(obs) = observer.as_deref_mut() {
            obs(&SmoIterate {
                iteration: iterations,
                alphas: &alphas,
                dual_objective: dual_objective_from_margins(&alphas, labels, &v),
                violation,
            });
        }
    };

    let bias = compute_bias(&alphas, labels, &v, c);
    let dual_objective = dual_objective_from_margins(&alphas, labels, &v);
    SmoSolution {
        alphas,
        bias,
        iterations,
        converged,
        dual_objective,
        max_violation,
    }
}

#[inline]
fn in_up(alpha: f64, y: f64, c: f64) -> bool {
    (y > 0.0 && alpha < c) || (y < 0.0 && alpha > 0.0)
}

#[inline]
fn in_low(alpha: f64, y: f64, c: f64) -> bool {
    (y < 0.0 && alpha < c) || (y > 0.0 && alpha > 0.0)
}

/// Maximal violating pair: `i = argmax_{I_up} v`, `j = argmin_{I_low} v`.
/// Ties go to the lowest index.
fn select_pair(alphas: &[f64], labels: &[f64], v: &[f64], c: f64) -> Option<(usize, usize, f64)> {
    let mut best_up: Option<(usize, f64)> = None;
    let mut best_low: Option<(usize, f64)> = None;
    for (k, (&a, &y)) in alphas.iter().zip(labels).enumerate() {
        if in_up(a, y, c) && best_up.is_none_or(|(_, m)| v[k] > m) {
            best_up = Some((k, v[k]));
        }
        if in_low(a, y, c) && best_low.is_none_or(|(_, m)| v[k] < m) {
            best_low = Some((k, v[k]));
        }
    }
    let ((i, vi), (j, vj)) = (best_up?, best_low?);
    Some((i, j, vi - vj))
}

/// Mean of `v` over free vectors, or the midpoint of the feasible interval
/// implied by the bound vectors when none are free.
fn compute_bias(alphas: &[f64], labels: &[f64], v: &[f64], c: f64) -> f64 {
    let mut free_sum = 0.0;
    let mut free_count = 0usize;
    let mut lower = f64::NEG_INFINITY;
    let mut upper = f64::INFINITY;
    for ((&a, &y), &vk) in alphas.iter().zip(labels).zip(v) {
        if a > 0.0 && a < c {
            free_sum += vk;
            free_count += 1;
        } else if in_up(a, y, c) {
            lower = lower.max(vk);
        } else {
            upper = upper.min(vk);
        }
    }
    if free_count > 0 {
        return free_sum / free_count as f64;
    }
    match (lower.is_finite(), upper.is_finite()) {
        (true, true) => 0.5 * (lower + upper),
        (true, false) => lower,
        (false, true) => upper,
        (false, false) => 0.0,
    }
}

/// Dual objective `½ Σ αᵢ (1 + yᵢ vᵢ)`, equal to `Σα − ½ αᵀQα`.
fn dual_objective_from_margins(alphas: &[f64], labels: &[f64], v: &[f64]) -> f64 {
    0.5 * alphas
        .iter()
        .zip(labels)
        .zip(v)
        .map(|((&a, &y), &vk)| a * (1.0 + y * vk))
        .sum::<f64>()
}

/// Dual objective evaluated directly from the Gram matrix.
pub fn dual_objective(gram: &Matrix, labels: &[f64], alphas: &[f64]) -> f64 {
    let n = alphas.len();
    let mut quad = 0.0;
    for i in 0..n {
        if alphas[i] == 0.0 {
            continue;
        }
        for j in 0..n {
            quad += alphas[i] * alphas[j] * labels[i] * labels[j] * gram[(i, j)];
        }
    }
    alphas.iter().sum::<f64>() - 0.5 * quad
}
