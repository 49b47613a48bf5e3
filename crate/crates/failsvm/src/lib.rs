//! Kernel-SVM failure classification for open-hole composite load states.
//!
//! The library covers the full pipeline: ingesting finite-element load-path
//! records, labeling them by stiffness degradation, building classical (RBF,
//! polynomial, sigmoid) and quantum (IQP, HE2 fidelity) kernels, maximizing
//! kernel-target alignment with Adam, solving the dual soft-margin SVM with
//! SMO, and evaluating classifiers via grid-search cross-validation and
//! learning curves.

pub mod align;
pub mod data;
pub mod error;
pub mod eval;
pub mod gram;
pub mod kernel;
pub mod pipeline;
pub mod quantum;
pub mod svm;

pub use error::{Error, Result};
pub use gram::GramMatrix;
pub use kernel::{ClassicalKernelSpec, KernelSpec};
