//! Soft-margin SVM: dual solver, trained model and prediction.

mod smo;

pub use smo::{solve_dual, SmoParams};

use crate::data::{FeatureScaler, Label};
use crate::error::{Error, Result};
use crate::gram::GramMatrix;
use crate::kernel::KernelSpec;
use serde::{Deserialize, Serialize};

/// Dual variables returned by the solver; everything needed for prediction
/// except the training features and the kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct DualSolution {
    pub alpha: Vec<f64>,
    pub b: f64,
    /// Indices with `alpha > support_eps`.
    pub support_indices: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverDiagnostics {
    /// Pair updates performed.
    pub iterations: usize,
    pub final_kkt_violation: f64,
    pub converged: bool,
    /// Dual objective at the returned iterate.
    pub objective: f64,
}

/// A trained soft-margin SVM classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub alpha: Vec<f64>,
    pub b: f64,
    pub support_indices: Vec<usize>,
    pub y_train: Vec<f64>,
    pub x_train: Vec<Vec<f64>>,
    pub kernel: KernelSpec,
    pub scaler: FeatureScaler,
    pub c: f64,
}

impl SvmModel {
    /// Solves the dual on the kernel's Gram matrix over `x` and assembles a
    /// predictive model. Features must already be scaled with `scaler`.
    pub fn fit(
        x: Vec<Vec<f64>>,
        y: Vec<f64>,
        kernel: KernelSpec,
        c: f64,
        scaler: FeatureScaler,
        params: &SmoParams,
    ) -> Result<(SvmModel, SolverDiagnostics)> {
        let gram = kernel.gram(&x)?;
        let (sol, diag) = solve_dual(&gram, &y, c, params)?;
        Ok((
            SvmModel {
                alpha: sol.alpha,
                b: sol.b,
                support_indices: sol.support_indices,
                y_train: y,
                x_train: x,
                kernel,
                scaler,
                c,
            },
            diag,
        ))
    }

    /// `f(x) = sum over support vectors of alpha y kernel(x_m, x) + b`.
    pub fn decision_value(&self, x: &[f64]) -> Result<f64> {
        let mut f = self.b;
        for &m in &self.support_indices {
            f += self.alpha[m] * self.y_train[m] * self.kernel.eval(&self.x_train[m], x)?;
        }
        Ok(f)
    }

    pub fn predict_one(&self, x: &[f64]) -> Result<Label> {
        Ok(Label::from_sign(self.decision_value(x)?))
    }

    /// Sign-function labels for a batch; an exact zero maps to `+1`.
    pub fn predict(&self, xs: &[Vec<f64>]) -> Result<Vec<Label>> {
        xs.iter().map(|x| self.predict_one(x)).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialize(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<SvmModel> {
        let model: SvmModel =
            serde_json::from_str(text).map_err(|e| Error::Serialize(e.to_string()))?;
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.y_train.len();
        if self.alpha.len() != m || self.x_train.len() != m {
            return Err(Error::Shape(format!(
                "model holds {} alphas, {} labels, {} samples",
                self.alpha.len(),
                m,
                self.x_train.len()
            )));
        }
        if m == 0 {
            return Err(Error::EmptyInput("model without training samples".into()));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::Parameter(format!(
                "C must be positive, got {}",
                self.c
            )));
        }
        if self.y_train.iter().any(|v| *v != 1.0 && *v != -1.0) {
            return Err(Error::Parameter("training labels must be +1 or -1".into()));
        }
        if self.support_indices.iter().any(|&i| i >= m) {
            return Err(Error::Shape("support index out of range".into()));
        }
        if self.alpha.iter().any(|a| !a.is_finite()) || !self.b.is_finite() {
            return Err(Error::InvalidRecord("non-finite dual variables".into()));
        }
        let dim = self.x_train[0].len();
        if self.x_train.iter().any(|x| x.len() != dim) {
            return Err(Error::Shape(
                "inconsistent training feature dimensions".into(),
            ));
        }
        self.kernel.validate()
    }
}

/// Decision values for evaluation samples from a precomputed cross block
/// `k_cross[(train_m, eval_j)]`; used when Gram matrices are sliced instead
/// of re-evaluating the kernel.
pub fn decision_values_from_gram(
    alpha: &[f64],
    b: f64,
    y_train: &[f64],
    k_cross: &GramMatrix,
) -> Result<Vec<f64>> {
    if k_cross.nrows() != alpha.len() || alpha.len() != y_train.len() {
        return Err(Error::Shape(format!(
            "cross block is {}x{} for {} training samples",
            k_cross.nrows(),
            k_cross.ncols(),
            alpha.len()
        )));
    }
    let mut out = vec![b; k_cross.ncols()];
    for (m, (&a, &ym)) in alpha.iter().zip(y_train).enumerate() {
        if a == 0.0 {
            continue;
        }
        let w = a * ym;
        for (j, o) in out.iter_mut().enumerate() {
            *o += w * k_cross.entries[(m, j)];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::FeatureScaler;

    #[test]
    fn model_json_round_trip() {
        let model = SvmModel {
            alpha: vec![0.5, 0.5],
            b: 0.1,
            support_indices: vec![0, 1],
            y_train: vec![1.0, -1.0],
            x_train: vec![vec![0.0], vec![1.0]],
            kernel: KernelSpec::rbf(1.0),
            scaler: FeatureScaler::identity(1),
            c: 10.0,
        };
        let json = model.to_json().unwrap();
        let back = SvmModel::from_json(&json).unwrap();
        assert_eq!(model, back);
    }

    #[test]
    fn from_json_rejects_inconsistent_models() {
        let model = SvmModel {
            alpha: vec![0.5],
            b: 0.0,
            support_indices: vec![0],
            y_train: vec![1.0, -1.0],
            x_train: vec![vec![0.0], vec![1.0]],
            kernel: KernelSpec::rbf(1.0),
            scaler: FeatureScaler::identity(1),
            c: 10.0,
        };
        let json = serde_json::to_string(&model).unwrap();
        assert!(SvmModel::from_json(&json).is_err());
    }

    #[test]
    fn sign_tie_break_maps_zero_to_plus_one() {
        assert_eq!(Label::from_sign(0.3), Label::NonFailed);
        assert_eq!(Label::from_sign(-2.0), Label::Failed);
        assert_eq!(Label::from_sign(0.0), Label::NonFailed);
    }
}
