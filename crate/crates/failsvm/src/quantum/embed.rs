//! Data-embedding circuits: the parameter-free IQP layer and the trainable
//! hardware-efficient HE2 layer.
//!
//! Features are assigned to qubits cyclically (`x[q mod len(x)]`), so an
//! embedding may be wider than the feature dimension.

use crate::error::{Error, Result};
use crate::quantum::state::{Gate, Statevector, MAX_QUBITS};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbeddingKind {
    Iqp,
    He2,
}

/// An embedding circuit: kind, width (qubits), depth (layers) and, for HE2,
/// one trainable angle per qubit per layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingSpec {
    pub kind: EmbeddingKind,
    pub width: usize,
    pub depth: usize,
    #[serde(default)]
    pub theta: Vec<f64>,
}

impl EmbeddingSpec {
    pub fn iqp(width: usize, depth: usize) -> Result<Self> {
        let spec = EmbeddingSpec {
            kind: EmbeddingKind::Iqp,
            width,
            depth,
            theta: Vec::new(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn he2(width: usize, depth: usize, theta: Vec<f64>) -> Result<Self> {
        let spec = EmbeddingSpec {
            kind: EmbeddingKind::He2,
            width,
            depth,
            theta,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// HE2 with angles drawn uniformly from `[-pi, pi]`.
    pub fn he2_seeded(width: usize, depth: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let theta = (0..width * depth)
            .map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
            .collect();
        Self::he2(width, depth, theta)
    }

    pub fn validate(&self) -> Result<()> {
        if self.width < 1 || self.width > MAX_QUBITS {
            return Err(Error::Spec(format!(
                "width must lie in 1..={MAX_QUBITS}, got {}",
                self.width
            )));
        }
        if self.depth < 1 {
            return Err(Error::Spec(format!(
                "depth must be >= 1, got {}",
                self.depth
            )));
        }
        let expected = self.param_count();
        if self.theta.len() != expected {
            return Err(Error::Spec(format!(
                "{:?} W{}D{} takes {} theta value(s), got {}",
                self.kind,
                self.width,
                self.depth,
                expected,
                self.theta.len()
            )));
        }
        if self.theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::Spec("non-finite theta".into()));
        }
        Ok(())
    }

    /// Number of trainable angles: `width * depth` for HE2, zero for IQP.
    pub fn param_count(&self) -> usize {
        match self.kind {
            EmbeddingKind::Iqp => 0,
            EmbeddingKind::He2 => self.width * self.depth,
        }
    }

    pub fn trainable(&self) -> bool {
        self.param_count() > 0
    }

    /// Width/depth tag, e.g. `W3D2`.
    pub fn tag(&self) -> String {
        format!("W{}D{}", self.width, self.depth)
    }

    pub fn with_theta(&self, theta: Vec<f64>) -> Result<Self> {
        let mut spec = self.clone();
        spec.theta = theta;
        spec.validate()?;
        Ok(spec)
    }

    pub fn fingerprint(&self) -> String {
        let theta = self
            .theta
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join(";");
        match self.kind {
            EmbeddingKind::Iqp => format!("iqp({})", self.tag()),
            EmbeddingKind::He2 => format!("he2({},theta=[{theta}])", self.tag()),
        }
    }

    /// Gate sequence embedding the scaled feature vector `x`.
    ///
    /// Per layer, IQP applies a Hadamard wall, `RZ(x_q)` on every qubit and
    /// `RZZ(x_q * x_q')` on every pair `q < q'`; HE2 applies the data
    /// rotation `RX(x_q)`, the trainable rotation `RY(theta)` and a CZ
    /// entangler ring (a single CZ at width 2, none at width 1).
    pub fn circuit(&self, x: &[f64]) -> Result<Vec<Gate>> {
        self.validate()?;
        if x.is_empty() {
            return Err(Error::EmptyInput(
                "embedding of an empty feature vector".into(),
            ));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidRecord(format!("non-finite features {x:?}")));
        }
        let w = self.width;
        let assigned: Vec<f64> = (0..w).map(|q| x[q % x.len()]).collect();
        let mut gates = Vec::new();
        for layer in 0..self.depth {
            match self.kind {
                EmbeddingKind::Iqp => {
                    for q in 0..w {
                        gates.push(Gate::h(q));
                    }
                    for (q, &a) in assigned.iter().enumerate() {
                        gates.push(Gate::rz(q, a));
                    }
                    for (q, &a) in assigned.iter().enumerate() {
                        for (off, &a2) in assigned[q + 1..].iter().enumerate() {
                            gates.push(Gate::rzz(q, q + 1 + off, a * a2));
                        }
                    }
                }
                EmbeddingKind::He2 => {
                    for (q, &a) in assigned.iter().enumerate() {
                        gates.push(Gate::rx(q, a));
                    }
                    for q in 0..w {
                        gates.push(Gate::ry(q, self.theta[layer * w + q]));
                    }
                    if w == 2 {
                        gates.push(Gate::cz(0, 1));
                    } else if w > 2 {
                        for q in 0..w {
                            gates.push(Gate::cz(q, (q + 1) % w));
                        }
                    }
                }
            }
        }
        Ok(gates)
    }
}

/// Prepares `U(x)|0...0>`.
pub fn embed_state(spec: &EmbeddingSpec, x: &[f64]) -> Result<Statevector> {
    let mut st = Statevector::zero_state(spec.width)?;
    st.apply_circuit(&spec.circuit(x)?)?;
    Ok(st)
}
