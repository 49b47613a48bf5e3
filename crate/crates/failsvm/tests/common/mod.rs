//! Independent oracles for the integration suite.
//!
//! These deliberately avoid the library's solver and simulator internals:
//! the QP oracle is plain projected-gradient ascent with an exact bisection
//! projection, and the circuit oracle applies full 2^n x 2^n gate matrices.

#![allow(clippy::needless_range_loop)] // explicit index math mirrors the definitions
#![allow(dead_code)] // each integration test uses a subset of the oracles

use failsvm::quantum::{Gate, GateKind};
use num_complex::Complex64;

// ─── brute-force QP oracle ───────────────────────────────────────────

pub struct QpOracleSolution {
    pub alpha: Vec<f64>,
    pub b: f64,
    pub objective: f64,
}

/// Maximizes `sum(alpha) - 1/2 alpha' Q alpha` over the box-and-hyperplane
/// feasible set by projected gradient ascent with step `1/L`.
pub fn qp_oracle(k: &[Vec<f64>], y: &[f64], c: f64) -> QpOracleSolution {
    let m = y.len();
    let q: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..m).map(|j| y[i] * y[j] * k[i][j]).collect())
        .collect();
    let lipschitz = (0..m)
        .map(|i| (0..m).map(|j| q[i][j].abs()).sum::<f64>())
        .fold(0.0f64, f64::max)
        .max(1e-12);
    let step = 1.0 / lipschitz;

    let objective = |alpha: &[f64]| -> f64 {
        let mut quad = 0.0;
        for i in 0..m {
            for j in 0..m {
                quad += alpha[i] * q[i][j] * alpha[j];
            }
        }
        alpha.iter().sum::<f64>() - 0.5 * quad
    };

    let mut alpha = vec![0.0; m];
    let mut last_obj = 0.0;
    let mut stale = 0usize;
    for _ in 0..500_000 {
        let mut v = vec![0.0; m];
        for i in 0..m {
            let grad = 1.0 - (0..m).map(|j| q[i][j] * alpha[j]).sum::<f64>();
            v[i] = alpha[i] + step * grad;
        }
        alpha = project_box_hyperplane(&v, y, c);
        let obj = objective(&alpha);
        if (obj - last_obj).abs() < 1e-13 {
            stale += 1;
            if stale > 200 {
                break;
            }
        } else {
            stale = 0;
        }
        last_obj = obj;
    }

    // Bias from free support vectors, else the feasible-interval midpoint.
    let f: Vec<f64> = (0..m)
        .map(|i| (0..m).map(|j| alpha[j] * y[j] * k[j][i]).sum::<f64>())
        .collect();
    let margin = c * 1e-6;
    let free: Vec<usize> = (0..m)
        .filter(|&i| alpha[i] > margin && alpha[i] < c - margin)
        .collect();
    let b = if !free.is_empty() {
        free.iter().map(|&i| y[i] - f[i]).sum::<f64>() / free.len() as f64
    } else {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for i in 0..m {
            let g = y[i] - f[i];
            if (y[i] > 0.0 && alpha[i] < c - margin) || (y[i] < 0.0 && alpha[i] > margin) {
                lo = lo.max(g);
            }
            if (y[i] < 0.0 && alpha[i] < c - margin) || (y[i] > 0.0 && alpha[i] > margin) {
                hi = hi.min(g);
            }
        }
        0.5 * (lo + hi)
    };

    QpOracleSolution {
        objective: objective(&alpha),
        alpha,
        b,
    }
}

/// Euclidean projection onto `{0 <= a <= c, y'a = 0}`: clamp `v - lambda y`
/// and bisect on lambda, along which the constraint residual is monotone.
fn project_box_hyperplane(v: &[f64], y: &[f64], c: f64) -> Vec<f64> {
    let clamped = |lambda: f64| -> Vec<f64> {
        v.iter()
            .zip(y)
            .map(|(vi, yi)| (vi - lambda * yi).clamp(0.0, c))
            .collect()
    };
    let residual = |lambda: f64| -> f64 {
        clamped(lambda)
            .iter()
            .zip(y)
            .map(|(a, yi)| a * yi)
            .sum::<f64>()
    };
    let bound = v.iter().fold(0.0f64, |acc, vi| acc.max(vi.abs())) + c + 1.0;
    let mut lo = -bound;
    let mut hi = bound;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if residual(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    clamped(0.5 * (lo + hi))
}

// ─── dense-unitary circuit oracle ────────────────────────────────────

/// Applies a gate through its full `2^n x 2^n` matrix.
pub fn dense_apply(n: usize, amps: &[Complex64], gate: &Gate) -> Vec<Complex64> {
    let u = dense_gate_matrix(n, gate);
    let dim = amps.len();
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    for (i, row) in u.iter().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, m) in row.iter().enumerate() {
            acc += m * amps[j];
        }
        out[i] = acc;
    }
    out
}

fn bit(index: usize, n: usize, q: usize) -> usize {
    (index >> (n - 1 - q)) & 1
}

fn dense_gate_matrix(n: usize, gate: &Gate) -> Vec<Vec<Complex64>> {
    let dim = 1usize << n;
    let zero = Complex64::new(0.0, 0.0);
    let mut u = vec![vec![zero; dim]; dim];
    match gate.kind {
        GateKind::H | GateKind::RX | GateKind::RY | GateKind::RZ => {
            let q = gate.targets[0];
            let m2 = single_qubit_matrix(gate);
            for i in 0..dim {
                for j in 0..dim {
                    if (i & !mask(n, q)) == (j & !mask(n, q)) {
                        u[i][j] = m2[bit(i, n, q)][bit(j, n, q)];
                    }
                }
            }
        }
        GateKind::CNOT | GateKind::CZ | GateKind::RZZ => {
            let (a, b) = (gate.targets[0], gate.targets[1]);
            let m4 = two_qubit_matrix(gate);
            let others = !(mask(n, a) | mask(n, b));
            for i in 0..dim {
                for j in 0..dim {
                    if (i & others) == (j & others) {
                        let row = 2 * bit(i, n, a) + bit(i, n, b);
                        let col = 2 * bit(j, n, a) + bit(j, n, b);
                        u[i][j] = m4[row][col];
                    }
                }
            }
        }
    }
    u
}

fn mask(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}

fn single_qubit_matrix(gate: &Gate) -> [[Complex64; 2]; 2] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re = |v: f64| Complex64::new(v, 0.0);
    match gate.kind {
        GateKind::H => [[re(s), re(s)], [re(s), re(-s)]],
        GateKind::RX => {
            let h = gate.angle.unwrap() / 2.0;
            let (c, ms) = (re(h.cos()), Complex64::new(0.0, -h.sin()));
            [[c, ms], [ms, c]]
        }
        GateKind::RY => {
            let h = gate.angle.unwrap() / 2.0;
            [[re(h.cos()), re(-h.sin())], [re(h.sin()), re(h.cos())]]
        }
        GateKind::RZ => {
            let h = gate.angle.unwrap() / 2.0;
            [
                [Complex64::from_polar(1.0, -h), re(0.0)],
                [re(0.0), Complex64::from_polar(1.0, h)],
            ]
        }
        _ => unreachable!("single-qubit kinds only"),
    }
}

fn two_qubit_matrix(gate: &Gate) -> [[Complex64; 4]; 4] {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut m = [[zero; 4]; 4];
    match gate.kind {
        GateKind::CNOT => {
            m[0][0] = one;
            m[1][1] = one;
            m[2][3] = one;
            m[3][2] = one;
        }
        GateKind::CZ => {
            for (k, item) in m.iter_mut().enumerate() {
                item[k] = if k == 3 { -one } else { one };
            }
        }
        GateKind::RZZ => {
            let h = gate.angle.unwrap() / 2.0;
            let even = Complex64::from_polar(1.0, -h);
            let odd = Complex64::from_polar(1.0, h);
            m[0][0] = even;
            m[1][1] = odd;
            m[2][2] = odd;
            m[3][3] = even;
        }
        _ => unreachable!("two-qubit kinds only"),
    }
    m
}
