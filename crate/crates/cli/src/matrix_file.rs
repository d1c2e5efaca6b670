//! JSON matrix files: `{"dims": [dA, dB], "matrix": [[[re, im], ...], ...]}`.
//!
//! Rows are row-major in the composite index `a * dB + b`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use sepscope::linalg::{I, ONE};
use sepscope::{BipartiteShape, ComplexMatrix, DensityOperator, HermitianOperator, Tolerances};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dims: [usize; 2],
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl MatrixFile {
    pub fn from_state(rho: &DensityOperator) -> Self {
        let shape = rho.shape();
        let m = rho.op().matrix();
        let n = shape.dim();
        Self {
            dims: [shape.d_a, shape.d_b],
            matrix: (0..n)
                .map(|i| (0..n).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect(),
        }
    }

    /// Validates dimensions and density-operator invariants. `path` is used for context only.
    pub fn to_state(&self, path: &Path, tol: &Tolerances) -> Result<DensityOperator> {
        let field = |field: &str, message: String| CliError::Field {
            path: path.to_path_buf(),
            field: field.to_string(),
            message,
        };
        let [d_a, d_b] = self.dims;
        let shape = BipartiteShape::new(d_a, d_b).map_err(|e| field("dims", e.to_string()))?;
        let n = shape.dim();
        if self.matrix.len() != n {
            return Err(field(
                "matrix",
                format!(
                    "expected {n} rows for dims {d_a}x{d_b}, found {}",
                    self.matrix.len()
                ),
            ));
        }
        for (i, row) in self.matrix.iter().enumerate() {
            if row.len() != n {
                return Err(field(
                    &format!("matrix[{i}]"),
                    format!("expected {n} entries, found {}", row.len()),
                ));
            }
        }
        let op = HermitianOperator::with_tolerance(build_matrix(n, &self.matrix), tol.hermiticity)?;
        Ok(DensityOperator::with_tolerance(op, shape, tol.state)?)
    }
}

pub fn read_state(path: &Path, tol: &Tolerances) -> Result<DensityOperator> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let file: MatrixFile = serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    file.to_state(path, tol)
}

pub fn write_state(path: &Path, rho: &DensityOperator) -> Result<()> {
    let text = serde_json::to_string_pretty(&MatrixFile::from_state(rho))?;
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn build_matrix(n: usize, rows: &[Vec<[f64; 2]>]) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| {
        let [re, im] = rows[i][j];
        ONE * re + I * im
    })
}
