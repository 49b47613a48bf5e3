//! Pairwise coordinate ascent (SMO) on the dual soft-margin SVM:
//!
//! maximize  sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij
//! subject to 0 <= alpha <= C and sum(alpha_i y_i) = 0.
//!
//! Working-set selection picks the maximal-KKT-violating pair: with
//! `g_i = y_i - f_i` (where `f_i` is the decision value without bias), the
//! bias feasibility interval is `[max g over B_low, min g over B_high]`, and
//! the pair realizing the largest interval inversion is updated first. Ties
//! break to the lowest index.

use crate::error::{Error, Result};
use crate::gram::GramMatrix;
use crate::svm::{DualSolution, SolverDiagnostics};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoParams {
    /// Convergence threshold on the KKT violation.
    pub tol: f64,
    /// Cap on pair updates; `None` means `10^4 * M`.
    pub max_iter: Option<usize>,
    /// Multipliers above this count as support vectors.
    pub support_eps: f64,
    /// Pairs with two-variable curvature at or below this are skipped.
    pub eta_eps: f64,
}

impl Default for SmoParams {
    fn default() -> Self {
        SmoParams {
            tol: 1e-3,
            max_iter: None,
            support_eps: 1e-8,
            eta_eps: 1e-12,
        }
    }
}

struct SmoState<'a> {
    k: &'a GramMatrix,
    y: &'a [f64],
    c: f64,
    alpha: Vec<f64>,
    /// f_i = sum_j alpha_j y_j K_ij (decision values without bias).
    f: Vec<f64>,
}

impl SmoState<'_> {
    fn g(&self, i: usize) -> f64 {
        self.y[i] - self.f[i]
    }

    /// Can contribute the lower end of the bias interval (b >= g_i).
    fn in_b_low(&self, i: usize) -> bool {
        (self.y[i] > 0.0 && self.alpha[i] < self.c) || (self.y[i] < 0.0 && self.alpha[i] > 0.0)
    }

    /// Can contribute the upper end of the bias interval (b <= g_i).
    fn in_b_high(&self, i: usize) -> bool {
        (self.y[i] < 0.0 && self.alpha[i] < self.c) || (self.y[i] > 0.0 && self.alpha[i] > 0.0)
    }

    /// Largest violating pair: argmax g over B_low, argmin g over B_high.
    fn select(&self) -> Option<(usize, usize, f64)> {
        let m = self.y.len();
        let mut i_best = None;
        let mut g_low = f64::NEG_INFINITY;
        let mut j_best = None;
        let mut g_high = f64::INFINITY;
        for t in 0..m {
            let g = self.g(t);
            if self.in_b_low(t) && g > g_low {
                g_low = g;
                i_best = Some(t);
            }
            if self.in_b_high(t) && g < g_high {
                g_high = g;
                j_best = Some(t);
            }
        }
        match (i_best, j_best) {
            (Some(i), Some(j)) => Some((i, j, g_low - g_high)),
            _ => None,
        }
    }

    /// Second-order update of the pair along the equality-preserving
    /// direction `alpha_i += y_i t`, `alpha_j -= y_j t`. Returns false when
    /// the pair cannot make progress (flat curvature or a blocked box).
    fn try_update(&mut self, i: usize, j: usize, eta_eps: f64) -> bool {
        let k = &self.k.entries;
        let eta = k[(i, i)] + k[(j, j)] - 2.0 * k[(i, j)];
        if eta <= eta_eps {
            return false;
        }
        let t_unc = (self.g(i) - self.g(j)) / eta;
        let (lo_i, hi_i) = if self.y[i] > 0.0 {
            (-self.alpha[i], self.c - self.alpha[i])
        } else {
            (self.alpha[i] - self.c, self.alpha[i])
        };
        let (lo_j, hi_j) = if self.y[j] > 0.0 {
            (self.alpha[j] - self.c, self.alpha[j])
        } else {
            (-self.alpha[j], self.c - self.alpha[j])
        };
        let t = t_unc.clamp(lo_i.max(lo_j), hi_i.min(hi_j));
        if t == 0.0 {
            return false;
        }
        let d_i = self.y[i] * t;
        let d_j = -self.y[j] * t;
        self.alpha[i] += d_i;
        self.alpha[j] += d_j;
        let wi = d_i * self.y[i];
        let wj = d_j * self.y[j];
        for t_idx in 0..self.f.len() {
            self.f[t_idx] += wi * k[(i, t_idx)] + wj * k[(j, t_idx)];
        }
        true
    }

    /// Fallback sweep over violating pairs when the best pair is stuck on an
    /// ill-conditioned subproblem. Returns false when no violating pair can
    /// move, which ends the solve with `converged = false`.
    fn sweep(&mut self, tol: f64, eta_eps: f64) -> bool {
        let m = self.y.len();
        let mut lows: Vec<(f64, usize)> = (0..m)
            .filter(|&t| self.in_b_low(t))
            .map(|t| (self.g(t), t))
            .collect();
        let mut highs: Vec<(f64, usize)> = (0..m)
            .filter(|&t| self.in_b_high(t))
            .map(|t| (self.g(t), t))
            .collect();
        lows.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
        highs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        for &(gi, i) in &lows {
            if gi - highs.first().map(|h| h.0).unwrap_or(f64::INFINITY) <= tol {
                break;
            }
            for &(gj, j) in &highs {
                if gi - gj <= tol {
                    break;
                }
                if i != j && self.try_update(i, j, eta_eps) {
                    return true;
                }
            }
        }
        false
    }

    fn objective(&self) -> f64 {
        let mut quad = 0.0;
        let mut lin = 0.0;
        for i in 0..self.alpha.len() {
            lin += self.alpha[i];
            quad += self.alpha[i] * self.y[i] * self.f[i];
        }
        lin - 0.5 * quad
    }

    /// Bias from free support vectors, falling back to the midpoint of the
    /// feasible interval when every support vector sits on a bound.
    fn bias(&self, support_eps: f64) -> f64 {
        let mut sum = 0.0;
        let mut count = 0usize;
        for i in 0..self.alpha.len() {
            if self.alpha[i] > support_eps && self.c - self.alpha[i] > support_eps {
                sum += self.g(i);
                count += 1;
            }
        }
        if count > 0 {
            return sum / count as f64;
        }
        let mut g_low = f64::NEG_INFINITY;
        let mut g_high = f64::INFINITY;
        for i in 0..self.alpha.len() {
            if self.in_b_low(i) {
                g_low = g_low.max(self.g(i));
            }
            if self.in_b_high(i) {
                g_high = g_high.min(self.g(i));
            }
        }
        match (g_low.is_finite(), g_high.is_finite()) {
            (true, true) => 0.5 * (g_low + g_high),
            (true, false) => g_low,
            (false, true) => g_high,
            (false, false) => 0.0,
        }
    }
}

/// Solves the dual soft-margin SVM on a precomputed Gram matrix.
///
/// Non-convergence (iteration cap or an ill-conditioned kernel on which no
/// violating pair can move) is reported through the diagnostics rather than
/// as an error; the best iterate found is returned either way.
pub fn solve_dual(
    k: &GramMatrix,
    y: &[f64],
    c: f64,
    params: &SmoParams,
) -> Result<(DualSolution, SolverDiagnostics)> {
    if !k.is_square() || k.nrows() != y.len() {
        return Err(Error::Shape(format!(
            "gram is {}x{} for {} labels",
            k.nrows(),
            k.ncols(),
            y.len()
        )));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Parameter(format!(
            "C must be strictly positive, got {c}"
        )));
    }
    if !(params.tol > 0.0 && params.tol.is_finite()) {
        return Err(Error::Parameter(format!(
            "tol must be positive, got {}",
            params.tol
        )));
    }
    if k.entries.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidRecord(
            "gram matrix contains non-finite entries".into(),
        ));
    }
    if y.iter().any(|v| *v != 1.0 && *v != -1.0) {
        return Err(Error::DegenerateLabels("labels must be +1 or -1".into()));
    }
    let m = y.len();
    if !(y.iter().any(|v| *v > 0.0) && y.iter().any(|v| *v < 0.0)) {
        return Err(Error::DegenerateLabels(
            "both classes must be present in the training labels".into(),
        ));
    }

    let mut state = SmoState {
        k,
        y,
        c,
        alpha: vec![0.0; m],
        f: vec![0.0; m],
    };
    let max_updates = params.max_iter.unwrap_or(10_000 * m);
    let mut updates = 0usize;
    let mut converged = false;

    loop {
        let Some((i, j, violation)) = state.select() else {
            converged = true;
            break;
        };
        if violation <= params.tol {
            converged = true;
            break;
        }
        if updates >= max_updates {
            break;
        }
        if state.try_update(i, j, params.eta_eps) || state.sweep(params.tol, params.eta_eps) {
            updates += 1;
        } else {
            // No violating pair can move: stalled on ill-conditioning.
            break;
        }
    }

    let final_violation = state.select().map(|(_, _, v)| v.max(0.0)).unwrap_or(0.0);
    let b = state.bias(params.support_eps);
    let support_indices: Vec<usize> = state
        .alpha
        .iter()
        .enumerate()
        .filter(|(_, &a)| a > params.support_eps)
        .map(|(i, _)| i)
        .collect();
    let objective = state.objective();
    Ok((
        DualSolution {
            alpha: state.alpha,
            b,
            support_indices,
        },
        SolverDiagnostics {
            iterations: updates,
            final_kkt_violation: final_violation,
            converged,
            objective,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{gram_matrix, ClassicalKernelSpec};
    use crate::svm::decision_values_from_gram;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rbf_gram(x: &[Vec<f64>], gamma: f64) -> GramMatrix {
        gram_matrix(&ClassicalKernelSpec::Rbf { gamma }, x).unwrap()
    }

    #[test]
    fn two_sample_hand_solution() {
        // x1 = 0 (y = +1), x2 = 1 (y = -1), RBF gamma = 1, C = 1e6:
        // alpha1 = alpha2 = 1/(1 - e^-1), b = 0.
        let x = vec![vec![0.0], vec![1.0]];
        let y = [1.0, -1.0];
        let gram = rbf_gram(&x, 1.0);
        let params = SmoParams {
            tol: 1e-10,
            ..SmoParams::default()
        };
        let (sol, diag) = solve_dual(&gram, &y, 1e6, &params).unwrap();
        let expected = 1.0 / (1.0 - (-1.0f64).exp());
        assert!(diag.converged);
        assert!((sol.alpha[0] - expected).abs() < 1e-6, "{}", sol.alpha[0]);
        assert!((sol.alpha[1] - expected).abs() < 1e-6);
        assert!(sol.b.abs() < 1e-6);
        assert_eq!(sol.support_indices, vec![0, 1]);

        // Margin conditions of the hand solution.
        let spec = ClassicalKernelSpec::Rbf { gamma: 1.0 };
        let f = |probe: f64| {
            let mut v = sol.b;
            for m in 0..2 {
                v += sol.alpha[m]
                    * y[m]
                    * crate::kernel::classical_kernel(&spec, &x[m], &[probe]).unwrap();
            }
            v
        };
        assert!((f(0.0) - 1.0).abs() < 1e-6);
        assert!((f(1.0) + 1.0).abs() < 1e-6);
        assert!(f(0.5).abs() < 1e-6);
    }

    #[test]
    fn box_and_equality_constraints_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..20 {
            let m = rng.gen_range(4..20);
            let x: Vec<Vec<f64>> = (0..m)
                .map(|_| (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect())
                .collect();
            let mut y: Vec<f64> = (0..m)
                .map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 })
                .collect();
            y[0] = 1.0;
            y[1] = -1.0;
            let c = [0.5, 1.0, 10.0][rng.gen_range(0..3)];
            let gram = rbf_gram(&x, 1.5);
            let (sol, _) = solve_dual(&gram, &y, c, &SmoParams::default()).unwrap();
            let mut eq = 0.0;
            for (a, yi) in sol.alpha.iter().zip(&y) {
                assert!(*a >= -1e-8 && *a <= c + 1e-8);
                eq += a * yi;
            }
            assert!(eq.abs() <= 1e-8, "equality violation {eq}");
        }
    }

    #[test]
    fn separable_clusters_reach_full_training_accuracy() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut x = Vec::new();
        let mut y = Vec::new();
        for _ in 0..20 {
            x.push(vec![rng.gen_range(-1.0..-0.5), rng.gen_range(-1.0..-0.5)]);
            y.push(1.0);
            x.push(vec![rng.gen_range(0.5..1.0), rng.gen_range(0.5..1.0)]);
            y.push(-1.0);
        }
        let gram = rbf_gram(&x, 2.0);
        let (sol, diag) = solve_dual(&gram, &y, 1e6, &SmoParams::default()).unwrap();
        assert!(diag.converged);
        let f = decision_values_from_gram(&sol.alpha, sol.b, &y, &gram).unwrap();
        for (fi, yi) in f.iter().zip(&y) {
            assert!(fi * yi > 0.0, "training point misclassified");
        }
    }

    #[test]
    fn duplicated_samples_are_handled() {
        // Exact duplicates produce zero-curvature pairs that must be skipped.
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let base: Vec<Vec<f64>> = (0..6)
            .map(|_| (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let labels = [1.0, -1.0, 1.0, -1.0, 1.0, -1.0];
        let mut x = Vec::new();
        let mut y = Vec::new();
        for (xi, yi) in base.iter().zip(&labels) {
            x.push(xi.clone());
            x.push(xi.clone());
            y.push(*yi);
            y.push(*yi);
        }
        let gram = rbf_gram(&x, 1.0);
        let (sol, diag) = solve_dual(&gram, &y, 5.0, &SmoParams::default()).unwrap();
        assert!(diag.converged, "duplicates stalled the solver");
        assert!(diag.final_kkt_violation <= 1e-3);
        let _ = sol;
    }

    #[test]
    fn rejects_bad_inputs() {
        let x = vec![vec![0.0], vec![1.0]];
        let gram = rbf_gram(&x, 1.0);
        assert!(matches!(
            solve_dual(&gram, &[1.0, -1.0], 0.0, &SmoParams::default()),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            solve_dual(&gram, &[1.0, 1.0], 1.0, &SmoParams::default()),
            Err(Error::DegenerateLabels(_))
        ));
        assert!(matches!(
            solve_dual(&gram, &[1.0, -1.0, 1.0], 1.0, &SmoParams::default()),
            Err(Error::Shape(_))
        ));
        let poisoned = GramMatrix::new(
            nalgebra::DMatrix::from_row_slice(2, 2, &[1.0, f64::NAN, f64::NAN, 1.0]),
            "poisoned",
        );
        assert!(matches!(
            solve_dual(&poisoned, &[1.0, -1.0], 1.0, &SmoParams::default()),
            Err(Error::InvalidRecord(_))
        ));
    }

    #[test]
    fn fully_degenerate_gram_stalls_without_converging() {
        // Every pair has zero curvature (all-ones Gram), so no violating
        // pair can move; the solver must report converged = false instead
        // of looping or panicking.
        let entries = nalgebra::DMatrix::from_element(4, 4, 1.0);
        let gram = GramMatrix::new(entries, "degenerate");
        let y = [1.0, -1.0, 1.0, -1.0];
        let (sol, diag) = solve_dual(&gram, &y, 10.0, &SmoParams::default()).unwrap();
        assert!(!diag.converged);
        assert_eq!(diag.iterations, 0);
        assert!(sol.alpha.iter().all(|a| *a == 0.0));
    }

    #[test]
    fn iteration_cap_reports_non_convergence() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        let x: Vec<Vec<f64>> = (0..30)
            .map(|_| (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let mut y: Vec<f64> = (0..30)
            .map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 })
            .collect();
        y[0] = 1.0;
        y[1] = -1.0;
        let gram = rbf_gram(&x, 1.0);
        let params = SmoParams {
            max_iter: Some(2),
            ..SmoParams::default()
        };
        let (_, diag) = solve_dual(&gram, &y, 10.0, &params).unwrap();
        assert!(!diag.converged);
        assert_eq!(diag.iterations, 2);
    }

    #[test]
    fn permutation_equivariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let m = 12;
        let x: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let mut y: Vec<f64> = (0..m)
            .map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 })
            .collect();
        y[0] = 1.0;
        y[1] = -1.0;
        let perm: Vec<usize> = {
            let mut p: Vec<usize> = (0..m).collect();
            use rand::seq::SliceRandom;
            p.shuffle(&mut rng);
            p
        };
        let xp: Vec<Vec<f64>> = perm.iter().map(|&i| x[i].clone()).collect();
        let yp: Vec<f64> = perm.iter().map(|&i| y[i]).collect();

        // The dual optimum is unique (strictly PD Gram on distinct points);
        // solving to a tight KKT tolerance pins both runs to it.
        let params = SmoParams {
            tol: 1e-12,
            ..SmoParams::default()
        };
        let (sol, _) = solve_dual(&rbf_gram(&x, 1.3), &y, 3.0, &params).unwrap();
        let (sol_p, _) = solve_dual(&rbf_gram(&xp, 1.3), &yp, 3.0, &params).unwrap();
        for (new_idx, &old_idx) in perm.iter().enumerate() {
            assert!(
                (sol.alpha[old_idx] - sol_p.alpha[new_idx]).abs() < 1e-7,
                "alpha not permutation-equivariant: {} vs {}",
                sol.alpha[old_idx],
                sol_p.alpha[new_idx]
            );
        }
        // Decision values on probes agree.
        let spec = ClassicalKernelSpec::Rbf { gamma: 1.3 };
        for _ in 0..20 {
            let probe: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let f = |alpha: &[f64], b: f64, xs: &[Vec<f64>], ys: &[f64]| {
                let mut v = b;
                for i in 0..m {
                    v += alpha[i]
                        * ys[i]
                        * crate::kernel::classical_kernel(&spec, &xs[i], &probe).unwrap();
                }
                v
            };
            let a = f(&sol.alpha, sol.b, &x, &y);
            let b = f(&sol_p.alpha, sol_p.b, &xp, &yp);
            assert!((a - b).abs() < 1e-10);
        }
    }
}
