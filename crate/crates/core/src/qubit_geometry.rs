//! Two-qubit geometry: Bloch vectors, the Hilbert-Schmidt `(r, s, t)` expansion,
//! the T-state tetrahedron and the magic basis.
//!
//! A two-qubit operator of unit trace expands as
//!
//! ```text
//! ρ = 1/4 (1⊗1 + r·σ⊗1 + 1⊗s·σ + Σ t_nm σ_n⊗σ_m)
//! ```
//!
//! Λ, Λ̃ and M act on this expansion by sign flips only.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bipartite::{BipartiteShape, DensityOperator};
use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix, HermitianOperator, I, ONE, ZERO};
use crate::maps::PositiveMap;

pub fn pauli_x() -> ComplexMatrix {
    DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> ComplexMatrix {
    DMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> ComplexMatrix {
    DMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

pub fn paulis() -> [ComplexMatrix; 3] {
    [pauli_x(), pauli_y(), pauli_z()]
}

/// `U_y = exp(-iπσ_y/2) = -iσ_y`.
pub fn rotation_y() -> ComplexMatrix {
    pauli_y().map(|z| -I * z)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector(pub [f64; 3]);

impl BlochVector {
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

fn tr_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    a.iter()
        .zip(b.transpose().iter())
        .fold(ZERO, |acc, (x, y)| acc + x * y)
}

/// `r_k = Tr(ρ σ_k)` for a single-qubit operator.
pub fn bloch_vector(rho: &HermitianOperator) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: rho.dim(),
        });
    }
    let p = paulis();
    Ok(BlochVector(
        [0, 1, 2].map(|k| tr_product(rho.matrix(), &p[k]).re),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HsDecomposition {
    pub r: [f64; 3],
    pub s: [f64; 3],
    pub t: [[f64; 3]; 3],
}

impl HsDecomposition {
    pub fn t_state(t: TDiagonalVector) -> Self {
        let [a, b, c] = t.0;
        Self {
            r: [0.0; 3],
            s: [0.0; 3],
            t: [[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]],
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut m = 0.0_f64;
        for k in 0..3 {
            m = m.max((self.r[k] - other.r[k]).abs());
            m = m.max((self.s[k] - other.s[k]).abs());
            for l in 0..3 {
                m = m.max((self.t[k][l] - other.t[k][l]).abs());
            }
        }
        m
    }

    /// Diagonal of `t` when `r = s = 0` and `t` is diagonal within `tol`.
    pub fn t_diagonal(&self, tol: f64) -> Option<TDiagonalVector> {
        let small = |v: f64| v.abs() <= tol;
        let off_diag = (0..3).all(|k| (0..3).all(|l| k == l || small(self.t[k][l])));
        if self.r.iter().all(|&v| small(v)) && self.s.iter().all(|&v| small(v)) && off_diag {
            Some(TDiagonalVector([self.t[0][0], self.t[1][1], self.t[2][2]]))
        } else {
            None
        }
    }
}

fn check_qubit_pair(op: &HermitianOperator) -> Result<()> {
    BipartiteShape::qubits().check(op)
}

/// Coefficients `r_n = Tr[ρ σ_n⊗1]`, `s_m = Tr[ρ 1⊗σ_m]`, `t_nm = Tr[ρ σ_n⊗σ_m]`.
pub fn hs_decompose_operator(op: &HermitianOperator) -> Result<HsDecomposition> {
    check_qubit_pair(op)?;
    let p = paulis();
    let id = DMatrix::<Complex64>::identity(2, 2);
    let m = op.matrix();
    let mut d = HsDecomposition {
        r: [0.0; 3],
        s: [0.0; 3],
        t: [[0.0; 3]; 3],
    };
    for n in 0..3 {
        d.r[n] = tr_product(m, &kron(&p[n], &id)).re;
        d.s[n] = tr_product(m, &kron(&id, &p[n])).re;
        for k in 0..3 {
            d.t[n][k] = tr_product(m, &kron(&p[n], &p[k])).re;
        }
    }
    Ok(d)
}

pub fn hs_decompose(rho: &DensityOperator) -> Result<HsDecomposition> {
    hs_decompose_operator(rho.op())
}

/// Reassembles the operator; the result need not be positive.
pub fn hs_compose(d: &HsDecomposition) -> HermitianOperator {
    let p = paulis();
    let id = DMatrix::<Complex64>::identity(2, 2);
    let mut acc = DMatrix::<Complex64>::identity(4, 4);
    for n in 0..3 {
        acc += kron(&p[n], &id) * Complex64::new(d.r[n], 0.0);
        acc += kron(&id, &p[n]) * Complex64::new(d.s[n], 0.0);
        for k in 0..3 {
            acc += kron(&p[n], &p[k]) * Complex64::new(d.t[n][k], 0.0);
        }
    }
    HermitianOperator::hermitize(acc * Complex64::new(0.25, 0.0))
}

/// Sign-flip action of a lifted map on the expansion coefficients.
pub fn map_action_on_hs(d: &HsDecomposition, map: PositiveMap) -> HsDecomposition {
    let neg3 = |v: [f64; 3]| v.map(|x| -x);
    let neg_t = |t: [[f64; 3]; 3]| t.map(neg3);
    match map {
        PositiveMap::Lambda => HsDecomposition {
            r: neg3(d.r),
            s: d.s,
            t: neg_t(d.t),
        },
        PositiveMap::DualLambda => HsDecomposition {
            r: d.r,
            s: neg3(d.s),
            t: neg_t(d.t),
        },
        PositiveMap::Symmetric => HsDecomposition {
            r: neg3(d.r),
            s: neg3(d.s),
            t: d.t,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TDiagonalVector(pub [f64; 3]);

impl TDiagonalVector {
    pub fn l1_norm(&self) -> f64 {
        self.0.iter().map(|v| v.abs()).sum()
    }

    pub fn negated(&self) -> Self {
        Self(self.0.map(|v| -v))
    }

    /// Facet values of the state tetrahedron; all non-negative inside. Each equals
    /// four times the weight of one Bell state in the T-diagonal state.
    pub fn tetrahedron_facets(&self) -> [f64; 4] {
        let [a, b, c] = self.0;
        [
            1.0 + a - b + c, // Φ+
            1.0 - a + b + c, // Φ-
            1.0 + a + b - c, // Ψ+
            1.0 - a - b - c, // Ψ-
        ]
    }

    pub fn in_tetrahedron(&self, tol: f64) -> bool {
        self.tetrahedron_facets().iter().all(|&f| f >= -tol)
    }

    pub fn in_octahedron(&self, tol: f64) -> bool {
        self.l1_norm() <= 1.0 + tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TStateRegion {
    OutsideTetrahedron,
    SeparableOctahedron,
    EntangledShell,
}

/// Classifies a T-diagonal vector: not a state, separable, or entangled.
pub fn t_state_region(t: TDiagonalVector, tol: f64) -> TStateRegion {
    if !t.in_tetrahedron(tol) {
        TStateRegion::OutsideTetrahedron
    } else if t.in_octahedron(tol) {
        TStateRegion::SeparableOctahedron
    } else {
        TStateRegion::EntangledShell
    }
}

/// `W = (1⊗1 + 1⊗σx + σx⊗1 - σx⊗σx)/2`, a CNOT controlled in the dual basis.
pub fn w_matrix() -> ComplexMatrix {
    let id = DMatrix::<Complex64>::identity(2, 2);
    let x = pauli_x();
    (kron(&id, &id) + kron(&id, &x) + kron(&x, &id) - kron(&x, &x)) * Complex64::new(0.5, 0.0)
}

/// `V = W D` with `D = diag(i, 1, 1, i)`.
pub fn magic_basis() -> ComplexMatrix {
    let d = [I, ONE, ONE, I];
    let w = w_matrix();
    DMatrix::from_fn(4, 4, |i, j| w[(i, j)] * d[j])
}

/// `V (V† ρ V)* V†`: complex conjugation in the magic basis.
pub fn magic_conjugation(rho: &DensityOperator) -> Result<HermitianOperator> {
    check_qubit_pair(rho.op())?;
    let v = magic_basis();
    let inner = (v.adjoint() * rho.op().matrix() * &v).map(|z| z.conj());
    Ok(HermitianOperator::hermitize(&v * inner * v.adjoint()))
}

/// `U_y ρ* U_y†` for a single-qubit operator (time reversal).
pub fn time_reversal(rho: &HermitianOperator) -> Result<HermitianOperator> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: rho.dim(),
        });
    }
    Ok(rho.conj().conjugate_by(&rotation_y()))
}
