//! Fidelity kernels from embedding circuits.

use crate::error::{Error, Result};
use crate::gram::GramMatrix;
use crate::quantum::embed::{embed_state, EmbeddingSpec};
use crate::quantum::state::Statevector;
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// How the fidelity is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelMethod {
    /// `|<psi(x)|psi(x2)>|^2` from two embedded states.
    Overlap,
    /// Probability of the all-zeros state after `U'(x2) U(x) |0>` where `U'`
    /// is the adjoint circuit.
    Adjoint,
}

/// A quantum kernel: the embedding plus the fingerprint of the feature scaler
/// its inputs must be prepared with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumKernelSpec {
    pub embedding: EmbeddingSpec,
    pub scaler_fingerprint: String,
}

impl QuantumKernelSpec {
    pub fn new(embedding: EmbeddingSpec, scaler_fingerprint: impl Into<String>) -> Self {
        QuantumKernelSpec {
            embedding,
            scaler_fingerprint: scaler_fingerprint.into(),
        }
    }

    pub fn fingerprint(&self) -> String {
        format!(
            "{}@{}",
            self.embedding.fingerprint(),
            self.scaler_fingerprint
        )
    }
}

/// Fidelity kernel between two scaled feature vectors.
pub fn quantum_kernel(
    spec: &EmbeddingSpec,
    x: &[f64],
    x2: &[f64],
    method: KernelMethod,
) -> Result<f64> {
    match method {
        KernelMethod::Overlap => {
            let a = embed_state(spec, x)?;
            let b = embed_state(spec, x2)?;
            Ok(a.inner_product(&b)?.norm_sqr())
        }
        KernelMethod::Adjoint => {
            let mut st = Statevector::zero_state(spec.width)?;
            st.apply_circuit(&spec.circuit(x)?)?;
            let reversed: Vec<_> = spec
                .circuit(x2)?
                .iter()
                .rev()
                .map(|g| g.inverse())
                .collect();
            st.apply_circuit(&reversed)?;
            Ok(st.prob_all_zeros())
        }
    }
}

/// Square fidelity Gram matrix; every sample is embedded exactly once and the
/// upper triangle is mirrored, so the result is symmetric by construction
/// with an exact unit diagonal.
pub fn quantum_gram(spec: &EmbeddingSpec, x: &[Vec<f64>]) -> Result<GramMatrix> {
    if x.is_empty() {
        return Err(Error::EmptyInput(
            "gram matrix over empty sample list".into(),
        ));
    }
    let states = embed_all(spec, x)?;
    let n = states.len();
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i + 1..n)
                .map(|j| {
                    states[i]
                        .inner_product(&states[j])
                        .expect("equal widths")
                        .norm_sqr()
                })
                .collect()
        })
        .collect();
    let mut entries = DMatrix::from_element(n, n, 1.0);
    for i in 0..n {
        for (off, &v) in upper[i].iter().enumerate() {
            let j = i + 1 + off;
            entries[(i, j)] = v;
            entries[(j, i)] = v;
        }
    }
    Ok(GramMatrix::new(entries, spec.fingerprint()))
}

/// Rectangular fidelity block between two sample lists.
pub fn quantum_gram_block(
    spec: &EmbeddingSpec,
    x: &[Vec<f64>],
    x2: &[Vec<f64>],
) -> Result<GramMatrix> {
    if x.is_empty() || x2.is_empty() {
        return Err(Error::EmptyInput(
            "gram block over empty sample list".into(),
        ));
    }
    let rows_states = embed_all(spec, x)?;
    let col_states = embed_all(spec, x2)?;
    let rows: Vec<Vec<f64>> = rows_states
        .par_iter()
        .map(|a| {
            col_states
                .iter()
                .map(|b| a.inner_product(b).expect("equal widths").norm_sqr())
                .collect()
        })
        .collect();
    let entries = DMatrix::from_fn(x.len(), x2.len(), |i, j| rows[i][j]);
    Ok(GramMatrix::new(entries, spec.fingerprint()))
}

fn embed_all(spec: &EmbeddingSpec, x: &[Vec<f64>]) -> Result<Vec<Statevector>> {
    x.par_iter().map(|xi| embed_state(spec, xi)).collect()
}
