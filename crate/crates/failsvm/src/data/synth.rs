//! Synthetic desk-scale stand-in for the FE data.
//!
//! Strain samples are drawn uniformly from the sampling hypercube and labeled
//! by a closed-form quadratic failure envelope: a sample fails when
//! `eps' * A * eps > 1` for the fixed SPD matrix [`ENVELOPE_A`]. Each sample
//! is also wrapped in a two-increment load path (an elastic anchor followed by
//! the sample itself) whose stress records follow `sig = g * C * eps` with
//! `g = 1` inside the envelope and `g = 0.8` outside, so running the
//! stiffness-degradation labeling over the generated paths reproduces the
//! closed-form labels exactly.

use crate::data::{
    ClassCounts, Dataset, FeatureScaler, HomogenizedIncrement, Label, LabeledSample, LoadPath,
    HYPERCUBE_HALF_WIDTH,
};
use crate::error::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SPD quadratic form of the synthetic failure envelope (units 1/strain^2).
pub const ENVELOPE_A: [[f64; 3]; 3] = [
    [2.0e4, 3.0e3, 0.0],
    [3.0e3, 1.5e4, 2.0e3],
    [0.0, 2.0e3, 1.0e4],
];

/// Diagonal secant-stiffness law of the synthetic paths (MPa).
const SECANT_C: [f64; 3] = [5.0e4, 5.0e4, 1.9e4];

/// Stiffness retention factor outside the envelope; anything below the 0.9
/// labeling threshold works.
const DEGRADED_G: f64 = 0.8;

/// Components smaller than this are zeroed when sampling, so the elastic
/// anchor (half the sample) never straddles the eps_div guard.
const SNAP_TOL: f64 = 2.5e-8;

/// Quadratic form `eps' * A * eps` of the failure envelope.
pub fn envelope_value(eps: &[f64; 3]) -> f64 {
    let mut q = 0.0;
    for (i, row) in ENVELOPE_A.iter().enumerate() {
        for (j, a) in row.iter().enumerate() {
            q += eps[i] * a * eps[j];
        }
    }
    q
}

/// Closed-form label: failed strictly outside the unit envelope.
pub fn closed_form_label(eps: &[f64; 3]) -> Label {
    if envelope_value(eps) > 1.0 {
        Label::Failed
    } else {
        Label::NonFailed
    }
}

/// Draws `n` uniform strain samples with closed-form labels.
pub fn synth_oracle_dataset(n: usize, seed: u64) -> Result<Dataset> {
    Ok(synth_oracle_paths(n, seed)?.0)
}

/// Draws `n` uniform strain samples and the load paths that reproduce their
/// labels through the stiffness-degradation pipeline.
pub fn synth_oracle_paths(n: usize, seed: u64) -> Result<(Dataset, Vec<LoadPath>)> {
    if n < 4 {
        return Err(Error::Parameter(format!(
            "synthetic dataset needs n >= 4, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(n);
    let mut paths = Vec::with_capacity(n);

    for m in 0..n {
        let mut eps = [0.0; 3];
        for e in &mut eps {
            *e = rng.gen_range(-HYPERCUBE_HALF_WIDTH..=HYPERCUBE_HALF_WIDTH);
            if e.abs() < SNAP_TOL {
                *e = 0.0;
            }
        }
        let q = envelope_value(&eps);
        let y = closed_form_label(&eps);
        samples.push(LabeledSample::new(eps, y)?);

        // Elastic anchor strictly inside the envelope (q <= 0.25).
        let anchor = if q < 1e-18 {
            [1e-3, 1e-3, 1e-3]
        } else {
            let alpha = 0.5 * 1.0f64.min(1.0 / q.sqrt());
            [alpha * eps[0], alpha * eps[1], alpha * eps[2]]
        };
        let g = if q > 1.0 { DEGRADED_G } else { 1.0 };
        let stress = |e: &[f64; 3], g: f64| {
            [
                g * SECANT_C[0] * e[0],
                g * SECANT_C[1] * e[1],
                g * SECANT_C[2] * e[2],
            ]
        };
        let increments = vec![
            HomogenizedIncrement::new(anchor, stress(&anchor, 1.0))?,
            HomogenizedIncrement::new(eps, stress(&eps, g))?,
        ];
        paths.push(LoadPath::new(format!("synth-{m:05}"), increments)?);
    }

    let class_counts = ClassCounts::of(&samples);
    Ok((
        Dataset {
            samples,
            scaler: FeatureScaler::identity(3),
            split_seed: 0,
            class_counts,
        },
        paths,
    ))
}
