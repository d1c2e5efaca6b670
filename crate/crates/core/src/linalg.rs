//! Dense Hermitian kernel: eigendecomposition and spectral matrix functions.
//!
//! Every spectral formula in the crate goes through [`hermitian_eig`]. Results are
//! consumed as spectra or reassembled operators, never as individual eigenvectors,
//! since degenerate eigenspaces carry no canonical basis.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Default relative Hermiticity tolerance.
pub const HERMITICITY_TOLERANCE: f64 = 1e-10;

/// Square complex matrix that is self-adjoint within tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, HERMITICITY_TOLERANCE)
    }

    /// Validates squareness, finiteness and Hermiticity, with `rel_tol` scaled by the
    /// largest entry magnitude.
    pub fn with_tolerance(matrix: ComplexMatrix, rel_tol: f64) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        let mut scale = 0.0_f64;
        for j in 0..cols {
            for i in 0..rows {
                let z = matrix[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                scale = scale.max(z.norm());
            }
        }
        let tolerance = rel_tol * scale;
        let mut worst = (0, 0, 0.0_f64);
        for i in 0..rows {
            for j in i..cols {
                let dev = (matrix[(i, j)] - matrix[(j, i)].conj()).norm();
                if dev > worst.2 {
                    worst = (i, j, dev);
                }
            }
        }
        if worst.2 > tolerance {
            return Err(Error::NotHermitian {
                row: worst.0,
                col: worst.1,
                deviation: worst.2,
                tolerance,
            });
        }
        Ok(Self { matrix })
    }

    /// Wraps the Hermitian part `(M + M†)/2` without validation. For results of
    /// operations that preserve Hermiticity up to rounding.
    pub(crate) fn hermitize(matrix: ComplexMatrix) -> Self {
        let adj = matrix.adjoint();
        Self {
            matrix: (matrix + adj).scale(0.5),
        }
    }

    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.is_square());
        Self { matrix }
    }

    /// Builds an operator from real row-major entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        Self::new(DMatrix::from_fn(dim, dim, |i, j| {
            Complex64::new(entries[i * dim + j], 0.0)
        }))
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            matrix: DMatrix::zeros(dim, dim),
        }
    }

    /// `|v><v|` for a (not necessarily normalized) vector.
    pub fn projector(v: &[Complex64]) -> Self {
        let n = v.len();
        Self::hermitize(DMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj()))
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self {
            matrix: DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    Complex64::new(values[i], 0.0)
                } else {
                    ZERO
                }
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            matrix: self.matrix.map(|z| z * factor),
        }
    }

    /// Entrywise complex conjugate (equivalently the transpose, for a Hermitian matrix).
    pub fn conj(&self) -> Self {
        Self {
            matrix: self.matrix.map(|z| z.conj()),
        }
    }

    /// `U X U†`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        Self::hermitize(u * &self.matrix * u.adjoint())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs_diff(&self.matrix, &other.matrix)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.matrix.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    pub fn eig(&self) -> Eigen {
        hermitian_eig(self)
    }

    pub fn spectrum(&self) -> Spectrum {
        hermitian_eig(self).spectrum
    }
}

impl Add for &HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: Self) -> HermitianOperator {
        HermitianOperator::from_trusted(&self.matrix + &rhs.matrix)
    }
}

impl Sub for &HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: Self) -> HermitianOperator {
        HermitianOperator::from_trusted(&self.matrix - &rhs.matrix)
    }
}

impl Neg for &HermitianOperator {
    type Output = HermitianOperator;
    fn neg(self) -> HermitianOperator {
        HermitianOperator::from_trusted(-&self.matrix)
    }
}

impl Mul<f64> for &HermitianOperator {
    type Output = HermitianOperator;
    fn mul(self, rhs: f64) -> HermitianOperator {
        self.scale(rhs)
    }
}

/// Ascending eigenvalues with multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    pub fn from_unsorted(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.0.first().copied().unwrap_or(f64::NAN)
    }

    pub fn max(&self) -> f64 {
        self.0.last().copied().unwrap_or(f64::NAN)
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn product(&self) -> f64 {
        self.0.iter().product()
    }

    /// Positional max deviation after sorting; infinite when lengths differ.
    pub fn max_abs_diff(&self, other: &Spectrum) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        self.0
            .iter()
            .zip(&other.0)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Pointwise products of two spectra, sorted.
    pub fn tensor(&self, other: &Spectrum) -> Spectrum {
        Spectrum::from_unsorted(
            self.0
                .iter()
                .flat_map(|a| other.0.iter().map(move |b| a * b))
                .collect(),
        )
    }
}

/// Spectrum plus eigenvectors as orthonormal columns, in matching order.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub spectrum: Spectrum,
    pub vectors: ComplexMatrix,
}

impl Eigen {
    /// Columns whose eigenvalue exceeds `rank_tol`.
    pub fn support(&self, rank_tol: f64) -> (ComplexMatrix, Vec<f64>) {
        self.select(|v| v > rank_tol)
    }

    /// Columns whose eigenvalue is at most `rank_tol`.
    pub fn kernel(&self, rank_tol: f64) -> (ComplexMatrix, Vec<f64>) {
        self.select(|v| v <= rank_tol)
    }

    fn select(&self, keep: impl Fn(f64) -> bool) -> (ComplexMatrix, Vec<f64>) {
        let idx: Vec<usize> = (0..self.spectrum.len())
            .filter(|&k| keep(self.spectrum.0[k]))
            .collect();
        let n = self.vectors.nrows();
        let cols = DMatrix::from_fn(n, idx.len(), |i, k| self.vectors[(i, idx[k])]);
        (cols, idx.iter().map(|&k| self.spectrum.0[k]).collect())
    }
}

pub fn hermitian_eig(h: &HermitianOperator) -> Eigen {
    let n = h.dim();
    if n == 0 {
        return Eigen {
            spectrum: Spectrum(Vec::new()),
            vectors: DMatrix::zeros(0, 0),
        };
    }
    let eig = SymmetricEigen::new(h.matrix.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, k| eig.eigenvectors[(i, order[k])]);
    Eigen {
        spectrum: Spectrum(values),
        vectors,
    }
}

/// `V diag(values) V†` for orthonormal columns `V`.
pub fn reassemble(vectors: &ComplexMatrix, values: &[f64]) -> HermitianOperator {
    let scaled = DMatrix::from_fn(vectors.nrows(), vectors.ncols(), |i, k| {
        vectors[(i, k)] * values[k]
    });
    HermitianOperator::hermitize(scaled * vectors.adjoint())
}

/// Applies `f` to each eigenvalue and reassembles.
///
/// With `support_only`, eigenvalues at or below `rank_tol` are dropped: the kernel maps to
/// zero and `f` is never evaluated there. A non-finite `f` at a retained eigenvalue is a
/// domain error.
pub fn matrix_function<F>(
    h: &HermitianOperator,
    f: F,
    support_only: bool,
    rank_tol: f64,
) -> Result<HermitianOperator>
where
    F: Fn(f64) -> f64,
{
    let eig = hermitian_eig(h);
    let (vectors, values) = if support_only {
        eig.support(rank_tol)
    } else {
        (eig.vectors, eig.spectrum.0)
    };
    let mapped = values
        .iter()
        .map(|&v| {
            let fv = f(v);
            if fv.is_finite() {
                Ok(fv)
            } else {
                Err(Error::Domain { eigenvalue: v })
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(reassemble(&vectors, &mapped))
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |m, (x, y)| m.max((x - y).norm()))
}

/// Largest deviation of `U†U` from the identity.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    let n = u.ncols();
    max_abs_diff(&(u.adjoint() * u), &DMatrix::identity(n, n))
}

/// Kronecker product in row-major subsystem order (left factor major).
pub fn kron(x: &ComplexMatrix, y: &ComplexMatrix) -> ComplexMatrix {
    let (xr, xc) = x.shape();
    let (yr, yc) = y.shape();
    DMatrix::from_fn(xr * yr, xc * yc, |i, j| {
        x[(i / yr, j / yc)] * y[(i % yr, j % yc)]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma_x() -> HermitianOperator {
        HermitianOperator::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    #[test]
    fn identity_spectrum() {
        let s = HermitianOperator::identity(2).spectrum();
        assert_eq!(s.len(), 2);
        assert!(s.max_abs_diff(&Spectrum::from_unsorted(vec![1.0, 1.0])) < 1e-15);
    }

    #[test]
    fn pauli_spectra() {
        let z = HermitianOperator::diagonal(&[1.0, -1.0]);
        assert!(
            z.spectrum()
                .max_abs_diff(&Spectrum::from_unsorted(vec![-1.0, 1.0]))
                < 1e-15
        );
        let x = sigma_x().spectrum();
        assert!((x.min() + 1.0).abs() < 1e-14 && (x.max() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn non_hermitian_names_entry_pair() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[ONE, Complex64::new(0.5, 0.0), Complex64::new(0.2, 0.0), ONE],
        );
        match HermitianOperator::new(m) {
            Err(Error::NotHermitian { row, col, .. }) => assert_eq!((row, col), (0, 1)),
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn non_square_and_non_finite_rejected() {
        let m = DMatrix::from_element(2, 3, ONE);
        assert!(matches!(
            HermitianOperator::new(m),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
        let mut m = DMatrix::identity(2, 2);
        m[(1, 1)] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(
            HermitianOperator::new(m),
            Err(Error::NonFinite { row: 1, col: 1 })
        ));
    }

    #[test]
    fn eig_reconstructs_with_orthonormal_columns() {
        let h = HermitianOperator::new(DMatrix::from_row_slice(
            3,
            3,
            &[
                Complex64::new(2.0, 0.0),
                Complex64::new(0.5, 0.3),
                Complex64::new(0.0, -1.0),
                Complex64::new(0.5, -0.3),
                Complex64::new(-1.0, 0.0),
                Complex64::new(0.25, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.25, 0.0),
                Complex64::new(0.5, 0.0),
            ],
        ))
        .unwrap();
        let eig = h.eig();
        let back = reassemble(&eig.vectors, eig.spectrum.values());
        assert!(back.max_abs_diff(&h) <= 1e-9 * h.max_abs_entry());
        assert!(unitarity_defect(&eig.vectors) < 1e-10);
        assert!((eig.spectrum.sum() - h.trace()).abs() < 1e-12);
    }

    #[test]
    fn log_of_identity_is_zero() {
        let out = matrix_function(&HermitianOperator::identity(3), f64::ln, false, 1e-10).unwrap();
        assert!(out.max_abs_entry() < 1e-15);
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let out = matrix_function(&HermitianOperator::zeros(3), f64::exp, false, 1e-10).unwrap();
        assert!(out.max_abs_diff(&HermitianOperator::identity(3)) < 1e-15);
    }

    #[test]
    fn support_log_of_projector_vanishes() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let p = HermitianOperator::projector(&[Complex64::new(s, 0.0), Complex64::new(0.0, s)]);
        let out = matrix_function(&p, f64::ln, true, 1e-10).unwrap();
        assert!(out.max_abs_entry() < 1e-14);
    }

    #[test]
    fn log_outside_support_is_domain_error() {
        let h = HermitianOperator::diagonal(&[1.0, -0.5]);
        match matrix_function(&h, f64::ln, true, 1e-10) {
            Ok(out) => assert!((out.matrix()[(0, 0)].re).abs() < 1e-15),
            Err(e) => panic!("support-only log should drop negative kernel: {e}"),
        }
        let h = HermitianOperator::diagonal(&[1.0, 0.5, -0.5]);
        match matrix_function(&h, f64::ln, false, 1e-10) {
            Err(Error::Domain { eigenvalue }) => assert_eq!(eigenvalue, -0.5),
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn kron_layout_is_left_major() {
        let a = DMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ZERO]);
        let b = DMatrix::from_row_slice(2, 2, &[ZERO, ZERO, ZERO, ONE]);
        let k = kron(&a, &b);
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == 1 && j == 1 { ONE } else { ZERO };
                assert_eq!(k[(i, j)], expected);
            }
        }
    }
}
