//! Stratified, seed-controlled train/test splitting.

use crate::data::{Dataset, Label};
use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Splits a dataset into train and test parts, stratified by label.
///
/// Per class, `round(test_fraction * n)` samples go to the test set (clamped
/// so both parts keep at least one member of each class). The partition is a
/// pure function of `(dataset order, test_fraction, seed)`.
pub fn split_dataset(ds: &Dataset, test_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::Parameter(format!(
            "test_fraction must lie in (0, 1), got {test_fraction}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut test_idx = Vec::new();
    let mut train_idx = Vec::new();

    for class in [Label::Failed, Label::NonFailed] {
        let mut idx: Vec<usize> = ds
            .samples
            .iter()
            .enumerate()
            .filter(|(_, s)| s.y == class)
            .map(|(i, _)| i)
            .collect();
        if idx.len() < 2 {
            return Err(Error::Stratification(format!(
                "class {:?} has {} member(s); at least 2 required",
                class,
                idx.len()
            )));
        }
        idx.shuffle(&mut rng);
        let n_test = ((test_fraction * idx.len() as f64).round() as usize).clamp(1, idx.len() - 1);
        test_idx.extend_from_slice(&idx[..n_test]);
        train_idx.extend_from_slice(&idx[n_test..]);
    }

    train_idx.sort_unstable();
    test_idx.sort_unstable();

    let take = |indices: &[usize]| {
        let mut part = Dataset::new(indices.iter().map(|&i| ds.samples[i]).collect());
        part.scaler = ds.scaler.clone();
        part.split_seed = seed;
        part
    };
    Ok((take(&train_idx), take(&test_idx)))
}
