//! Bipartite bookkeeping: shapes, tensor products, partial trace and transpose.
//!
//! Composite indices are row-major with A major: basis element `(a, b)` sits at
//! `a * d_b + b`.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, HermitianOperator, Spectrum, ZERO};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BipartiteShape {
    pub d_a: usize,
    pub d_b: usize,
}

impl BipartiteShape {
    pub fn new(d_a: usize, d_b: usize) -> Result<Self> {
        if d_a == 0 || d_b == 0 {
            return Err(Error::DegenerateShape {
                d_a,
                d_b,
                reason: "factor dimensions must be positive",
            });
        }
        Ok(Self { d_a, d_b })
    }

    pub const fn qubits() -> Self {
        Self { d_a: 2, d_b: 2 }
    }

    pub fn dim(&self) -> usize {
        self.d_a * self.d_b
    }

    pub fn check(&self, op: &HermitianOperator) -> Result<()> {
        if op.dim() != self.dim() {
            return Err(Error::ShapeMismatch {
                d_a: self.d_a,
                d_b: self.d_b,
                dim: op.dim(),
            });
        }
        Ok(())
    }

    pub fn factor(&self, s: Subsystem) -> usize {
        match s {
            Subsystem::A => self.d_a,
            Subsystem::B => self.d_b,
        }
    }
}

impl fmt::Display for BipartiteShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.d_a, self.d_b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

impl Subsystem {
    pub fn other(self) -> Self {
        match self {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        }
    }
}

/// Unit-trace positive-semidefinite operator with its bipartite shape attached.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    op: HermitianOperator,
    shape: BipartiteShape,
}

impl DensityOperator {
    pub fn new(op: HermitianOperator, shape: BipartiteShape) -> Result<Self> {
        Self::with_tolerance(op, shape, Tolerances::default().state)
    }

    pub fn with_tolerance(op: HermitianOperator, shape: BipartiteShape, tol: f64) -> Result<Self> {
        shape.check(&op)?;
        let trace = op.trace();
        if (trace - 1.0).abs() > tol {
            return Err(Error::InvalidTrace {
                trace,
                tolerance: tol,
            });
        }
        let min_eigenvalue = op.spectrum().min();
        if min_eigenvalue < -tol {
            return Err(Error::NotPositive {
                min_eigenvalue,
                tolerance: tol,
            });
        }
        Ok(Self { op, shape })
    }

    pub(crate) fn from_trusted(op: HermitianOperator, shape: BipartiteShape) -> Self {
        debug_assert_eq!(op.dim(), shape.dim());
        Self { op, shape }
    }

    /// `op / Tr(op)` for a positive operator.
    pub fn normalized(op: HermitianOperator, shape: BipartiteShape) -> Result<Self> {
        let t = op.trace();
        if t <= 0.0 || !t.is_finite() {
            return Err(Error::InvalidTrace {
                trace: t,
                tolerance: 0.0,
            });
        }
        Self::new(op.scale(1.0 / t), shape)
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn shape(&self) -> BipartiteShape {
        self.shape
    }

    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    pub fn spectrum(&self) -> Spectrum {
        self.op.spectrum()
    }

    /// Reduced state of the given subsystem.
    pub fn marginal(&self, keep: Subsystem) -> HermitianOperator {
        partial_trace(&self.op, self.shape, keep.other()).expect("shape validated at construction")
    }

    pub fn local_unitary(&self, u: &nalgebra::DMatrix<num_complex::Complex64>) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: u.nrows(),
            });
        }
        Ok(Self {
            op: self.op.conjugate_by(u),
            shape: self.shape,
        })
    }
}

/// Von Neumann entropy in bits from a spectrum; eigenvalues at or below `rank_tol` contribute zero.
pub fn entropy_bits(spectrum: &Spectrum, rank_tol: f64) -> f64 {
    -spectrum
        .values()
        .iter()
        .filter(|&&p| p > rank_tol)
        .map(|&p| p * p.log2())
        .sum::<f64>()
}

pub fn tensor(x: &HermitianOperator, y: &HermitianOperator) -> HermitianOperator {
    HermitianOperator::from_trusted(kron(x.matrix(), y.matrix()))
}

pub fn partial_trace(
    op: &HermitianOperator,
    shape: BipartiteShape,
    over: Subsystem,
) -> Result<HermitianOperator> {
    shape.check(op)?;
    let (da, db) = (shape.d_a, shape.d_b);
    let m = op.matrix();
    let out = match over {
        Subsystem::B => DMatrix::from_fn(da, da, |a, a2| {
            (0..db).fold(ZERO, |acc, b| acc + m[(a * db + b, a2 * db + b)])
        }),
        Subsystem::A => DMatrix::from_fn(db, db, |b, b2| {
            (0..da).fold(ZERO, |acc, a| acc + m[(a * db + b, a * db + b2)])
        }),
    };
    Ok(HermitianOperator::from_trusted(out))
}

pub fn partial_transpose(
    op: &HermitianOperator,
    shape: BipartiteShape,
    over: Subsystem,
) -> Result<HermitianOperator> {
    shape.check(op)?;
    let db = shape.d_b;
    let m = op.matrix();
    let n = shape.dim();
    let out = DMatrix::from_fn(n, n, |i, j| {
        let (a, b) = (i / db, i % db);
        let (a2, b2) = (j / db, j % db);
        match over {
            Subsystem::A => m[(a2 * db + b, a * db + b2)],
            Subsystem::B => m[(a * db + b2, a2 * db + b)],
        }
    });
    Ok(HermitianOperator::from_trusted(out))
}

/// Factor dimensions of an operator on `A ⊗ B ⊗ A' ⊗ B'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FourFactorDims {
    pub a: usize,
    pub b: usize,
    pub a2: usize,
    pub b2: usize,
}

impl FourFactorDims {
    pub fn new(a: usize, b: usize, a2: usize, b2: usize) -> Self {
        Self { a, b, a2, b2 }
    }

    pub fn total(&self) -> usize {
        self.a * self.b * self.a2 * self.b2
    }

    pub fn regrouped(&self) -> BipartiteShape {
        BipartiteShape {
            d_a: self.a * self.a2,
            d_b: self.b * self.b2,
        }
    }

    fn source_index(&self, i: usize) -> usize {
        // target index ((a, a'), (b, b')) -> source (a, b, a', b')
        let (left, right) = (i / (self.b * self.b2), i % (self.b * self.b2));
        let (a, a2) = (left / self.a2, left % self.a2);
        let (b, b2) = (right / self.b2, right % self.b2);
        ((a * self.b + b) * self.a2 + a2) * self.b2 + b2
    }
}

/// Regroups an operator on `A ⊗ B ⊗ A' ⊗ B'` to the `(A A') | (B B')` bipartition.
pub fn permute_to_bipartition(
    op: &HermitianOperator,
    dims: FourFactorDims,
) -> Result<(HermitianOperator, BipartiteShape)> {
    if dims.a == 0 || dims.b == 0 || dims.a2 == 0 || dims.b2 == 0 || dims.total() != op.dim() {
        return Err(Error::DimensionMismatch {
            expected: dims.total(),
            actual: op.dim(),
        });
    }
    let n = op.dim();
    let src: Vec<usize> = (0..n).map(|i| dims.source_index(i)).collect();
    let m = op.matrix();
    let out = DMatrix::from_fn(n, n, |i, j| m[(src[i], src[j])]);
    Ok((HermitianOperator::from_trusted(out), dims.regrouped()))
}
