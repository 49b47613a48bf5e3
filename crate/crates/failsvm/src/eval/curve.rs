//! Learning curves over nested training subsets.

use crate::error::{Error, Result};
use crate::eval::{classification_metrics, ConfusionCounts, MetricsRecord};
use crate::kernel::KernelSpec;
use crate::svm::{decision_values_from_gram, solve_dual, SmoParams};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub n_train: usize,
    pub metrics: MetricsRecord,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearningCurve {
    pub points: Vec<CurvePoint>,
    pub test_size: usize,
    pub seed: u64,
}

/// Produces one stratified order of all training indices: per-class shuffles
/// interleaved so that every prefix holds each class in proportion (within
/// one sample). Subsets for increasing fractions are prefixes of this order,
/// which makes them nested by construction.
fn stratified_prefix_order(y: &[f64], seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_class: Vec<Vec<usize>> = Vec::new();
    for class in [1.0, -1.0] {
        let mut idx: Vec<usize> = y
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == class)
            .map(|(i, _)| i)
            .collect();
        idx.shuffle(&mut rng);
        idx.reverse(); // consume from the back
        per_class.push(idx);
    }
    let total: usize = per_class.iter().map(Vec::len).sum();
    let shares: Vec<f64> = per_class
        .iter()
        .map(|c| c.len() as f64 / total as f64)
        .collect();
    let mut taken = vec![0usize; per_class.len()];
    let mut order = Vec::with_capacity(total);
    for t in 1..=total {
        // Most-lagging class relative to its proportional share.
        let mut best = None;
        let mut best_deficit = f64::NEG_INFINITY;
        for (c, share) in shares.iter().enumerate() {
            if per_class[c].is_empty() {
                continue;
            }
            let deficit = share * t as f64 - taken[c] as f64;
            if deficit > best_deficit {
                best_deficit = deficit;
                best = Some(c);
            }
        }
        let c = best.expect("some class still has samples");
        order.push(per_class[c].pop().expect("non-empty"));
        taken[c] += 1;
    }
    order
}

/// Fits the SVM on nested stratified subsets of the training set and scores
/// all five metrics on the fixed test set.
///
/// Subset sizes are `floor(fraction * n_train)`; points are ordered by size
/// and deduplicated. Non-convergence of a point is recorded, not fatal.
#[allow(clippy::too_many_arguments)]
pub fn learning_curve(
    x_train: &[Vec<f64>],
    y_train: &[f64],
    x_test: &[Vec<f64>],
    y_test: &[f64],
    spec: &KernelSpec,
    c: f64,
    fractions: &[f64],
    seed: u64,
    smo: &SmoParams,
) -> Result<LearningCurve> {
    if x_train.is_empty() || x_train.len() != y_train.len() {
        return Err(Error::Shape(format!(
            "{} training samples but {} labels",
            x_train.len(),
            y_train.len()
        )));
    }
    if x_test.is_empty() || x_test.len() != y_test.len() {
        return Err(Error::Shape(format!(
            "{} test samples but {} labels",
            x_test.len(),
            y_test.len()
        )));
    }
    for &f in fractions {
        if !(f > 0.0 && f <= 1.0) {
            return Err(Error::Parameter(format!(
                "fractions must lie in (0, 1], got {f}"
            )));
        }
    }
    if fractions.is_empty() {
        return Err(Error::EmptyInput("no learning-curve fractions".into()));
    }

    let order = stratified_prefix_order(y_train, seed);
    let mut sizes: Vec<usize> = fractions
        .iter()
        .map(|f| ((f * x_train.len() as f64).floor() as usize).clamp(2, x_train.len()))
        .collect();
    sizes.sort_unstable();
    sizes.dedup();

    let gram_train = spec.gram(x_train)?;
    let gram_cross = spec.gram_block(x_train, x_test)?;
    let all_test: Vec<usize> = (0..x_test.len()).collect();

    let points: Vec<Result<CurvePoint>> = sizes
        .par_iter()
        .map(|&n| {
            let subset: Vec<usize> = {
                let mut s = order[..n].to_vec();
                s.sort_unstable();
                s
            };
            let y_sub: Vec<f64> = subset.iter().map(|&i| y_train[i]).collect();
            let k_sub = gram_train.slice(&subset, &subset);
            let (sol, diag) = solve_dual(&k_sub, &y_sub, c, smo)?;
            let k_cross = gram_cross.slice(&subset, &all_test);
            let f = decision_values_from_gram(&sol.alpha, sol.b, &y_sub, &k_cross)?;
            let y_pred: Vec<f64> = f
                .iter()
                .map(|v| if *v >= 0.0 { 1.0 } else { -1.0 })
                .collect();
            let counts = ConfusionCounts::from_labels(y_test, &y_pred)?;
            Ok(CurvePoint {
                n_train: n,
                metrics: classification_metrics(&counts)?,
                converged: diag.converged,
            })
        })
        .collect();

    let points: Result<Vec<CurvePoint>> = points.into_iter().collect();
    Ok(LearningCurve {
        points: points?,
        test_size: x_test.len(),
        seed,
    })
}
