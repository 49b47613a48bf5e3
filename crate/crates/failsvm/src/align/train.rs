//! Adam ascent on the kernel-target alignment.

use crate::align::{AdamState, TrainableKernel};
use crate::error::{Error, Result};
use crate::kernel::KernelSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// KTA training hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KtaConfig {
    pub iters: usize,
    pub learning_rate: f64,
    /// Mini-batch size; batches are resampled without replacement each step.
    pub batch: usize,
    pub seed: u64,
    /// Full-data KTA is logged every this many steps.
    pub log_every: usize,
    /// Central-difference step for kernels without a closed-form gradient.
    pub fd_step: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for KtaConfig {
    fn default() -> Self {
        KtaConfig {
            iters: 200,
            learning_rate: 0.05,
            batch: 64,
            seed: 0,
            log_every: 10,
            fd_step: 1e-4,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

impl KtaConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Parameter(format!(
                "learning_rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if self.batch == 0 {
            return Err(Error::Parameter("batch must be >= 1".into()));
        }
        if self.log_every == 0 {
            return Err(Error::Parameter("log_every must be >= 1".into()));
        }
        if !(self.fd_step > 0.0 && self.fd_step.is_finite()) {
            return Err(Error::Parameter(format!(
                "fd_step must be positive, got {}",
                self.fd_step
            )));
        }
        Ok(())
    }
}

/// Training trace: full-data KTA at logged iterations plus the parameter
/// endpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KtaReport {
    pub history: Vec<(usize, f64)>,
    pub initial_params: Vec<f64>,
    pub final_params: Vec<f64>,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

impl KtaReport {
    pub fn initial_kta(&self) -> f64 {
        self.history.first().map(|(_, v)| *v).unwrap_or(f64::NAN)
    }

    pub fn final_kta(&self) -> f64 {
        self.history.last().map(|(_, v)| *v).unwrap_or(f64::NAN)
    }

    /// `iteration,kta` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration,kta\n");
        for (it, v) in &self.history {
            let _ = writeln!(out, "{it},{v}");
        }
        out
    }
}

/// Maximizes the kernel-target alignment of a trainable kernel with Adam.
///
/// Gradients are evaluated on mini-batches resampled per step; the report
/// history records full-data KTA. With `iters = 0` the kernel spec is
/// returned unchanged.
pub fn train_kta(
    spec: &KernelSpec,
    x: &[Vec<f64>],
    y: &[f64],
    config: &KtaConfig,
) -> Result<(KernelSpec, KtaReport)> {
    config.validate()?;
    if x.is_empty() || x.len() != y.len() {
        return Err(Error::Shape(format!(
            "{} samples but {} labels",
            x.len(),
            y.len()
        )));
    }
    let mut kernel = TrainableKernel::from_spec(spec)?;
    let mut params = kernel.params();
    let initial_params = params.clone();
    let mut history = vec![(0usize, kernel.kta(x, y)?)];

    let mut adam = AdamState::new(params.len(), config.beta1, config.beta2, config.eps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    for it in 1..=config.iters {
        let (bx, by): (Vec<Vec<f64>>, Vec<f64>) = if config.batch >= x.len() {
            (x.to_vec(), y.to_vec())
        } else {
            let idx = rand::seq::index::sample(&mut rng, x.len(), config.batch);
            idx.iter().map(|i| (x[i].clone(), y[i])).unzip()
        };
        let grad = kernel.kta_gradient(&bx, &by, config.fd_step)?;
        if grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::Divergence {
                iteration: it,
                last_good: params,
            });
        }
        adam.ascend(&mut params, &grad, config.learning_rate)?;
        kernel = kernel.with_params(&params)?;
        if it % config.log_every == 0 || it == config.iters {
            history.push((it, kernel.kta(x, y)?));
        }
    }

    let report = KtaReport {
        history,
        initial_params,
        final_params: params,
        batch_size: config.batch,
        learning_rate: config.learning_rate,
        seed: config.seed,
    };
    Ok((kernel.to_spec(), report))
}
