//! Classical kernel functions and the unified kernel specification shared by
//! the SVM solver and the alignment trainer.

use crate::error::{Error, Result};
use crate::gram::GramMatrix;
use crate::quantum::{
    quantum_gram, quantum_gram_block, quantum_kernel, KernelMethod, QuantumKernelSpec,
};
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// RBF, polynomial and sigmoid kernels with their parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassicalKernelSpec {
    Rbf { gamma: f64 },
    Polynomial { gamma: f64, c0: f64, degree: u32 },
    Sigmoid { gamma: f64, c0: f64 },
}

impl ClassicalKernelSpec {
    pub fn validate(&self) -> Result<()> {
        let gamma = match self {
            ClassicalKernelSpec::Rbf { gamma } => *gamma,
            ClassicalKernelSpec::Polynomial { gamma, degree, .. } => {
                if *degree < 1 {
                    return Err(Error::Parameter(format!(
                        "polynomial degree must be >= 1, got {degree}"
                    )));
                }
                *gamma
            }
            ClassicalKernelSpec::Sigmoid { gamma, .. } => *gamma,
        };
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Parameter(format!(
                "kernel gamma must be strictly positive, got {gamma}"
            )));
        }
        Ok(())
    }

    pub fn fingerprint(&self) -> String {
        match self {
            ClassicalKernelSpec::Rbf { gamma } => format!("rbf(gamma={gamma})"),
            ClassicalKernelSpec::Polynomial { gamma, c0, degree } => {
                format!("polynomial(gamma={gamma},c0={c0},degree={degree})")
            }
            ClassicalKernelSpec::Sigmoid { gamma, c0 } => {
                format!("sigmoid(gamma={gamma},c0={c0})")
            }
        }
    }
}

/// Evaluates a classical kernel on one pair of feature vectors.
pub fn classical_kernel(spec: &ClassicalKernelSpec, x: &[f64], x2: &[f64]) -> Result<f64> {
    if x.len() != x2.len() {
        return Err(Error::Shape(format!(
            "feature dimensions differ: {} vs {}",
            x.len(),
            x2.len()
        )));
    }
    spec.validate()?;
    Ok(match spec {
        ClassicalKernelSpec::Rbf { gamma } => {
            let d2: f64 = x
                .iter()
                .zip(x2)
                .map(|(a, b)| {
                    let d = a - b;
                    d * d
                })
                .sum();
            (-gamma * d2).exp()
        }
        ClassicalKernelSpec::Polynomial { gamma, c0, degree } => {
            (gamma * dot(x, x2) + c0).powi(*degree as i32)
        }
        ClassicalKernelSpec::Sigmoid { gamma, c0 } => (gamma * dot(x, x2) + c0).tanh(),
    })
}

fn dot(x: &[f64], x2: &[f64]) -> f64 {
    x.iter().zip(x2).map(|(a, b)| a * b).sum()
}

/// Square Gram matrix over one sample list, symmetrized by `(K + K')/2`.
pub fn gram_matrix(spec: &ClassicalKernelSpec, x: &[Vec<f64>]) -> Result<GramMatrix> {
    let mut gram = gram_block(spec, x, x)?;
    gram.symmetrize()?;
    Ok(gram)
}

/// Rectangular cross block `K[i][j] = kernel(x[i], x2[j])`.
pub fn gram_block(
    spec: &ClassicalKernelSpec,
    x: &[Vec<f64>],
    x2: &[Vec<f64>],
) -> Result<GramMatrix> {
    if x.is_empty() || x2.is_empty() {
        return Err(Error::EmptyInput(
            "gram matrix over empty sample list".into(),
        ));
    }
    spec.validate()?;
    let dim = x[0].len();
    for row in x.iter().chain(x2.iter()) {
        if row.len() != dim {
            return Err(Error::Shape(format!(
                "inconsistent feature dimension: {} vs {}",
                row.len(),
                dim
            )));
        }
    }
    let ncols = x2.len();
    let rows: Vec<Vec<f64>> = x
        .par_iter()
        .map(|xi| {
            x2.iter()
                .map(|xj| classical_kernel(spec, xi, xj).expect("dimensions checked"))
                .collect()
        })
        .collect();
    let entries = DMatrix::from_fn(x.len(), ncols, |i, j| rows[i][j]);
    Ok(GramMatrix::new(entries, spec.fingerprint()))
}

/// Tagged description of any kernel the pipeline can train and fit with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelSpec {
    Classical(ClassicalKernelSpec),
    Quantum(QuantumKernelSpec),
}

impl KernelSpec {
    pub fn rbf(gamma: f64) -> Self {
        KernelSpec::Classical(ClassicalKernelSpec::Rbf { gamma })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            KernelSpec::Classical(c) => c.validate(),
            KernelSpec::Quantum(q) => q.embedding.validate(),
        }
    }

    pub fn fingerprint(&self) -> String {
        match self {
            KernelSpec::Classical(c) => c.fingerprint(),
            KernelSpec::Quantum(q) => q.fingerprint(),
        }
    }

    /// Scalar kernel evaluation; features must already be scaled to the
    /// kernel's working range.
    pub fn eval(&self, x: &[f64], x2: &[f64]) -> Result<f64> {
        match self {
            KernelSpec::Classical(c) => classical_kernel(c, x, x2),
            KernelSpec::Quantum(q) => quantum_kernel(&q.embedding, x, x2, KernelMethod::Overlap),
        }
    }

    /// Square symmetrized Gram matrix.
    pub fn gram(&self, x: &[Vec<f64>]) -> Result<GramMatrix> {
        match self {
            KernelSpec::Classical(c) => gram_matrix(c, x),
            KernelSpec::Quantum(q) => quantum_gram(&q.embedding, x),
        }
    }

    /// Rectangular cross block.
    pub fn gram_block(&self, x: &[Vec<f64>], x2: &[Vec<f64>]) -> Result<GramMatrix> {
        match self {
            KernelSpec::Classical(c) => gram_block(c, x, x2),
            KernelSpec::Quantum(q) => quantum_gram_block(&q.embedding, x, x2),
        }
    }
}
