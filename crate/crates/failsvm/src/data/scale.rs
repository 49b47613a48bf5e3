//! Affine feature scaling from the sampling hypercube to a kernel's working
//! range. The source interval is fixed by the sampling space rather than
//! derived from data, so any subset of a dataset maps identically.

use crate::data::{LabeledSample, HYPERCUBE_HALF_WIDTH};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Working range for the classical kernels.
pub const CLASSICAL_TARGET: (f64, f64) = (-1.0, 1.0);

/// Working range for quantum embeddings (rotation angles).
pub const QUANTUM_TARGET: (f64, f64) = (-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2);

/// Invertible per-feature affine map `x' = scale * x + offset`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureScaler {
    pub scale: Vec<f64>,
    pub offset: Vec<f64>,
}

impl FeatureScaler {
    pub fn identity(dim: usize) -> Self {
        FeatureScaler {
            scale: vec![1.0; dim],
            offset: vec![0.0; dim],
        }
    }

    /// Maps `[-HYPERCUBE_HALF_WIDTH, HYPERCUBE_HALF_WIDTH]` onto
    /// `[target.0, target.1]` for every feature.
    pub fn from_hypercube(target: (f64, f64), dim: usize) -> Result<Self> {
        let (lo, hi) = target;
        if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
            return Err(Error::Parameter(format!(
                "target interval [{lo}, {hi}] is degenerate"
            )));
        }
        let scale = (hi - lo) / (2.0 * HYPERCUBE_HALF_WIDTH);
        let offset = (hi + lo) / 2.0;
        Ok(FeatureScaler {
            scale: vec![scale; dim],
            offset: vec![offset; dim],
        })
    }

    pub fn dim(&self) -> usize {
        self.scale.len()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.scale.iter().zip(&self.offset))
            .map(|(v, (s, o))| s * v + o)
            .collect()
    }

    pub fn invert(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.scale.iter().zip(&self.offset))
            .map(|(v, (s, o))| (v - o) / s)
            .collect()
    }

    /// Short textual identity used to tie kernels and models to the scaling
    /// their features were prepared with.
    pub fn fingerprint(&self) -> String {
        let fields: Vec<String> = self
            .scale
            .iter()
            .zip(&self.offset)
            .map(|(s, o)| format!("{s}*x+{o}"))
            .collect();
        format!("affine[{}]", fields.join(";"))
    }
}

/// Scales every sample's strain triple to the target interval and returns the
/// feature rows together with the scaler for inference-time reuse.
pub fn scale_features(
    samples: &[LabeledSample],
    target: (f64, f64),
) -> Result<(Vec<Vec<f64>>, FeatureScaler)> {
    let scaler = FeatureScaler::from_hypercube(target, 3)?;
    let rows = samples.iter().map(|s| scaler.apply(&s.eps)).collect();
    Ok((rows, scaler))
}
