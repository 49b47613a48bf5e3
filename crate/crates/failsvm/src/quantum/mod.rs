//! Statevector simulation, embedding circuits and fidelity kernels.

mod embed;
mod kernel;
mod state;

pub use embed::{embed_state, EmbeddingKind, EmbeddingSpec};
pub use kernel::{
    quantum_gram, quantum_gram_block, quantum_kernel, KernelMethod, QuantumKernelSpec,
};
pub use state::{init_state, Gate, GateKind, Statevector, MAX_QUBITS};
