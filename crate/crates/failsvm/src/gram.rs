//! Dense kernel (Gram) matrices.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use std::fmt::Write as _;
use std::path::Path;

/// Kernel evaluations over sample pairs. Square matrices built over a single
/// sample list are symmetrized; rectangular blocks hold cross evaluations.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pub entries: DMatrix<f64>,
    /// Fingerprint of the kernel that produced the entries.
    pub kernel: String,
}

impl GramMatrix {
    pub fn new(entries: DMatrix<f64>, kernel: impl Into<String>) -> Self {
        GramMatrix {
            entries,
            kernel: kernel.into(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    /// Replaces the entries by `(K + K')/2`.
    pub fn symmetrize(&mut self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::Shape(format!(
                "cannot symmetrize a {}x{} block",
                self.nrows(),
                self.ncols()
            )));
        }
        let t = self.entries.transpose();
        self.entries = (&self.entries + t) * 0.5;
        Ok(())
    }

    /// CSV dump for debugging: plain rows of entries, no header.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                if j > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{}", self.entries[(i, j)]);
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_csv()).map_err(|e| Error::io(path.display().to_string(), e))
    }

    /// Sub-matrix with the given row and column sample indices.
    ///
    /// Panics when an index is out of range, like container indexing.
    pub fn slice(&self, rows: &[usize], cols: &[usize]) -> GramMatrix {
        let entries = DMatrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.entries[(rows[i], cols[j])]
        });
        GramMatrix::new(entries, self.kernel.clone())
    }
}
