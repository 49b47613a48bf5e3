//! Kernel alignment, kernel-target alignment and its gradients.

mod adam;
mod train;

pub use adam::AdamState;
pub use train::{train_kta, KtaConfig, KtaReport};

use crate::error::{Error, Result};
use crate::gram::GramMatrix;
use crate::kernel::{gram_matrix, ClassicalKernelSpec, KernelSpec};
use crate::quantum::{quantum_gram, QuantumKernelSpec};
use nalgebra::DMatrix;
use rayon::prelude::*;

/// Alignment between two kernel matrices:
/// `<K1, K2>_F / (||K1||_F * ||K2||_F)`.
pub fn alignment(k1: &DMatrix<f64>, k2: &DMatrix<f64>) -> Result<f64> {
    if k1.nrows() != k1.ncols() || k1.shape() != k2.shape() {
        return Err(Error::Shape(format!(
            "alignment needs equal square matrices, got {:?} and {:?}",
            k1.shape(),
            k2.shape()
        )));
    }
    let inner: f64 = k1.iter().zip(k2.iter()).map(|(a, b)| a * b).sum();
    let n1 = k1.iter().map(|a| a * a).sum::<f64>().sqrt();
    let n2 = k2.iter().map(|a| a * a).sum::<f64>().sqrt();
    if n1 == 0.0 || n2 == 0.0 {
        return Err(Error::DegenerateKernel);
    }
    Ok(inner / (n1 * n2))
}

/// Kernel-target alignment `<K, y y'>_F / (M ||K||_F)`, computed as
/// `y' K y / (M ||K||_F)` without materializing the target matrix.
pub fn kta(k: &DMatrix<f64>, y: &[f64]) -> Result<f64> {
    let m = y.len();
    if k.nrows() != m || k.ncols() != m {
        return Err(Error::Shape(format!(
            "kernel is {:?} but there are {m} labels",
            k.shape()
        )));
    }
    if y.iter().any(|v| *v != 1.0 && *v != -1.0) {
        return Err(Error::Parameter("labels must be +1 or -1".into()));
    }
    let mut quad = 0.0;
    for i in 0..m {
        for j in 0..m {
            quad += y[i] * k[(i, j)] * y[j];
        }
    }
    let norm = k.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::DegenerateKernel);
    }
    Ok(quad / (m as f64 * norm))
}

/// A kernel with free parameters exposed as a flat vector: RBF (optimized in
/// log-gamma so gamma stays positive) or an HE2 embedding (raw angles).
#[derive(Debug, Clone)]
pub enum TrainableKernel {
    Rbf { log_gamma: f64 },
    He2(QuantumKernelSpec),
}

impl TrainableKernel {
    pub fn from_spec(spec: &KernelSpec) -> Result<Self> {
        match spec {
            KernelSpec::Classical(ClassicalKernelSpec::Rbf { gamma }) => {
                if !(*gamma > 0.0 && gamma.is_finite()) {
                    return Err(Error::Parameter(format!(
                        "gamma must be positive, got {gamma}"
                    )));
                }
                Ok(TrainableKernel::Rbf {
                    log_gamma: gamma.ln(),
                })
            }
            KernelSpec::Quantum(q) if q.embedding.trainable() => {
                Ok(TrainableKernel::He2(q.clone()))
            }
            other => Err(Error::NotTrainable(other.fingerprint())),
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match self {
            TrainableKernel::Rbf { log_gamma } => vec![*log_gamma],
            TrainableKernel::He2(q) => q.embedding.theta.clone(),
        }
    }

    pub fn with_params(&self, params: &[f64]) -> Result<Self> {
        match self {
            TrainableKernel::Rbf { .. } => {
                if params.len() != 1 {
                    return Err(Error::Parameter(format!(
                        "RBF takes 1 parameter, got {}",
                        params.len()
                    )));
                }
                Ok(TrainableKernel::Rbf {
                    log_gamma: params[0],
                })
            }
            TrainableKernel::He2(q) => {
                let embedding = q.embedding.with_theta(params.to_vec())?;
                Ok(TrainableKernel::He2(QuantumKernelSpec {
                    embedding,
                    scaler_fingerprint: q.scaler_fingerprint.clone(),
                }))
            }
        }
    }

    pub fn to_spec(&self) -> KernelSpec {
        match self {
            TrainableKernel::Rbf { log_gamma } => KernelSpec::rbf(log_gamma.exp()),
            TrainableKernel::He2(q) => KernelSpec::Quantum(q.clone()),
        }
    }

    pub fn gram(&self, x: &[Vec<f64>]) -> Result<GramMatrix> {
        match self {
            TrainableKernel::Rbf { log_gamma } => gram_matrix(
                &ClassicalKernelSpec::Rbf {
                    gamma: log_gamma.exp(),
                },
                x,
            ),
            TrainableKernel::He2(q) => quantum_gram(&q.embedding, x),
        }
    }

    pub fn kta(&self, x: &[Vec<f64>], y: &[f64]) -> Result<f64> {
        kta(&self.gram(x)?.entries, y)
    }

    /// Gradient of the KTA with respect to the free parameters.
    ///
    /// RBF uses the closed form through `dK/dgamma = -||x - x'||^2 K`,
    /// chained into log-gamma space; HE2 uses central finite differences of
    /// step `fd_step` per angle.
    pub fn kta_gradient(&self, x: &[Vec<f64>], y: &[f64], fd_step: f64) -> Result<Vec<f64>> {
        match self {
            TrainableKernel::Rbf { log_gamma } => {
                Ok(vec![rbf_kta_log_gamma_gradient(*log_gamma, x, y)?])
            }
            TrainableKernel::He2(_) => {
                if !(fd_step > 0.0 && fd_step.is_finite()) {
                    return Err(Error::Parameter(format!(
                        "finite-difference step must be positive, got {fd_step}"
                    )));
                }
                let params = self.params();
                (0..params.len())
                    .into_par_iter()
                    .map(|p| {
                        let mut plus = params.clone();
                        plus[p] += fd_step;
                        let mut minus = params.clone();
                        minus[p] -= fd_step;
                        let k_plus = self.with_params(&plus)?.kta(x, y)?;
                        let k_minus = self.with_params(&minus)?.kta(x, y)?;
                        Ok((k_plus - k_minus) / (2.0 * fd_step))
                    })
                    .collect()
            }
        }
    }
}

/// Gradient of the KTA of a kernel spec; IQP and the non-trainable classical
/// kernels produce a not-trainable error.
pub fn kta_gradient(
    spec: &KernelSpec,
    x: &[Vec<f64>],
    y: &[f64],
    fd_step: f64,
) -> Result<Vec<f64>> {
    TrainableKernel::from_spec(spec)?.kta_gradient(x, y, fd_step)
}

fn rbf_kta_log_gamma_gradient(log_gamma: f64, x: &[Vec<f64>], y: &[f64]) -> Result<f64> {
    let gamma = log_gamma.exp();
    let m = x.len();
    if m == 0 {
        return Err(Error::EmptyInput(
            "KTA gradient over empty sample list".into(),
        ));
    }
    if y.len() != m {
        return Err(Error::Shape(format!("{m} samples but {} labels", y.len())));
    }
    // d2[(i, j)] = ||x_i - x_j||^2, k = exp(-gamma d2)
    let mut quad = 0.0; // y' K y
    let mut norm2 = 0.0; // <K, K>
    let mut d_quad = 0.0; // y' dK y   with dK/dloggamma = -gamma d2 K
    let mut d_norm = 0.0; // <K, dK>
    for i in 0..m {
        for j in 0..m {
            let d2: f64 = x[i]
                .iter()
                .zip(&x[j])
                .map(|(a, b)| {
                    let d = a - b;
                    d * d
                })
                .sum();
            let k = (-gamma * d2).exp();
            let dk = -gamma * d2 * k;
            quad += y[i] * y[j] * k;
            norm2 += k * k;
            d_quad += y[i] * y[j] * dk;
            d_norm += k * dk;
        }
    }
    let norm = norm2.sqrt();
    if norm == 0.0 {
        return Err(Error::DegenerateKernel);
    }
    let mf = m as f64 * norm;
    Ok(d_quad / mf - quad * d_norm / (mf * norm2))
}
