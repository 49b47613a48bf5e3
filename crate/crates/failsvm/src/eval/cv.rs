//! Stratified k-fold grid search over the slack penalty.

use crate::error::{Error, Result};
use crate::kernel::KernelSpec;
use crate::svm::{decision_values_from_gram, solve_dual, SmoParams};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// One grid cell: a C value with its per-fold validation accuracies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvCell {
    pub c: f64,
    pub mean_accuracy: f64,
    pub fold_accuracies: Vec<f64>,
    pub converged: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub grid: Vec<CvCell>,
    pub best_c: f64,
    pub folds: usize,
    pub seed: u64,
}

/// Assigns sample indices to `folds` stratified folds. Per class, shuffled
/// indices are dealt round-robin, so fold sizes differ by at most one per
/// class. Every fold must receive both classes.
pub fn stratified_folds(y: &[f64], folds: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if folds < 2 {
        return Err(Error::Parameter(format!("folds must be >= 2, got {folds}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = vec![Vec::new(); folds];
    for class in [1.0, -1.0] {
        let mut idx: Vec<usize> = y
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == class)
            .map(|(i, _)| i)
            .collect();
        if idx.len() < folds {
            return Err(Error::Stratification(format!(
                "class {class} has {} member(s) for {folds} folds",
                idx.len()
            )));
        }
        idx.shuffle(&mut rng);
        for (k, i) in idx.into_iter().enumerate() {
            assignment[k % folds].push(i);
        }
    }
    for fold in &mut assignment {
        fold.sort_unstable();
    }
    Ok(assignment)
}

/// Grid-search cross-validation over C for a fixed kernel.
///
/// The Gram matrix is computed once over the full training set and sliced per
/// fold. A cell whose solve hits the iteration cap or stalls is still scored
/// on the returned best iterate, with the convergence flag recorded. `best_c`
/// is the cell with the highest mean validation accuracy; ties go to the
/// smallest C.
pub fn grid_search_cv(
    x: &[Vec<f64>],
    y: &[f64],
    spec: &KernelSpec,
    c_grid: &[f64],
    folds: usize,
    seed: u64,
    smo: &SmoParams,
) -> Result<CvResult> {
    if x.is_empty() || x.len() != y.len() {
        return Err(Error::Shape(format!(
            "{} samples but {} labels",
            x.len(),
            y.len()
        )));
    }
    let mut grid: Vec<f64> = Vec::new();
    for &c in c_grid {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Parameter(format!(
                "C grid entry must be positive, got {c}"
            )));
        }
        if grid.contains(&c) {
            log::warn!("duplicate C = {c} in grid, deduplicated");
        } else {
            grid.push(c);
        }
    }
    if grid.is_empty() {
        return Err(Error::EmptyInput("empty C grid".into()));
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let fold_idx = stratified_folds(y, folds, seed)?;
    let gram = spec.gram(x)?;

    // All (C, fold) cells are independent; results merge by cell order.
    let cells: Vec<Result<(f64, bool)>> = grid
        .iter()
        .flat_map(|&c| fold_idx.iter().map(move |fold| (c, fold)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(c, fold)| {
            let val: Vec<usize> = fold.clone();
            let train: Vec<usize> = (0..y.len()).filter(|i| !val.contains(i)).collect();
            let k_train = gram.slice(&train, &train);
            let y_train: Vec<f64> = train.iter().map(|&i| y[i]).collect();
            let (sol, diag) = solve_dual(&k_train, &y_train, c, smo)?;
            let k_cross = gram.slice(&train, &val);
            let f = decision_values_from_gram(&sol.alpha, sol.b, &y_train, &k_cross)?;
            let correct = f
                .iter()
                .zip(val.iter().map(|&i| y[i]))
                .filter(|(fi, yi)| (**fi >= 0.0) == (*yi > 0.0))
                .count();
            Ok((correct as f64 / val.len() as f64, diag.converged))
        })
        .collect();

    let mut result_grid = Vec::with_capacity(grid.len());
    let mut iter = cells.into_iter();
    for &c in &grid {
        let mut fold_accuracies = Vec::with_capacity(folds);
        let mut converged = Vec::with_capacity(folds);
        for _ in 0..folds {
            let (acc, conv) = iter.next().expect("cell count matches")?;
            fold_accuracies.push(acc);
            converged.push(conv);
        }
        let mean_accuracy = fold_accuracies.iter().sum::<f64>() / folds as f64;
        result_grid.push(CvCell {
            c,
            mean_accuracy,
            fold_accuracies,
            converged,
        });
    }

    let mut best_c = result_grid[0].c;
    let mut best_acc = result_grid[0].mean_accuracy;
    for cell in &result_grid[1..] {
        if cell.mean_accuracy > best_acc {
            best_acc = cell.mean_accuracy;
            best_c = cell.c;
        }
    }
    Ok(CvResult {
        grid: result_grid,
        best_c,
        folds,
        seed,
    })
}
