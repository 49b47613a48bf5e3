//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A record contains a non-finite or otherwise unusable value.
    #[error("invalid record: {0}")]
    InvalidRecord(String),

    /// Shear stress requested at (near-)zero engineering shear strain.
    #[error("shear singularity: |gamma12| = {gamma12:e} with nonzero shear work")]
    ShearSingularity { gamma12: f64 },

    /// No strain component ever exceeds the division guard, so no stiffness
    /// baseline exists.
    #[error("degenerate path {path_id}: no strain component exceeds eps_div")]
    DegeneratePath { path_id: String },

    /// Malformed input file; `row` is 1-based and counts the header.
    #[error("parse error at row {row}: {msg}")]
    Parse { row: usize, msg: String },

    #[error("empty dataset: {0}")]
    EmptyDataset(String),

    /// A stratified split or fold assignment cannot give every part both
    /// classes.
    #[error("stratification error: {0}")]
    Stratification(String),

    /// Qubit count outside the supported range.
    #[error("capacity error: {0} qubits (supported range is 1..=20)")]
    Capacity(usize),

    /// Mismatched dimensions between operands.
    #[error("shape error: {0}")]
    Shape(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    /// A kernel matrix with zero Frobenius norm cannot be aligned.
    #[error("degenerate kernel: zero Frobenius norm")]
    DegenerateKernel,

    /// KTA training requested on a kernel without free parameters.
    #[error("kernel {0} has no trainable parameters")]
    NotTrainable(String),

    /// A non-finite gradient appeared during KTA training; the message
    /// carries the last parameters that were still finite.
    #[error("KTA training diverged at iteration {iteration}; last good parameters {last_good:?}")]
    Divergence {
        iteration: usize,
        last_good: Vec<f64>,
    },

    /// SVM training needs both classes present.
    #[error("degenerate labels: {0}")]
    DegenerateLabels(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// An embedding spec violates its own invariants.
    #[error("embedding spec error: {0}")]
    Spec(String),

    /// A pipeline stage is missing an upstream artifact.
    #[error("missing dependency: required file {0} not found (run the producing stage first)")]
    Dependency(String),

    /// All config problems, reported at once.
    #[error("invalid config:\n{}", .0.join("\n"))]
    ConfigValidation(Vec<String>),

    #[error("pipeline stage {stage} failed: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serialize(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn stage(stage: impl Into<String>, source: Error) -> Self {
        Error::Stage {
            stage: stage.into(),
            source: Box::new(source),
        }
    }
}
