//! Separability diagnostics for bipartite quantum states.
//!
//! The crate computes the conditional amplitude operator
//! `ρ_{A|B} = exp[log ρ_AB - log(1_A ⊗ ρ_B)]`, the conditional von Neumann entropy
//! built from it, and the positive-map criteria obtained by lifting
//! `Γ: X -> Tr(X)·1 - X` to one or both factors. Each criterion is a necessary
//! condition for separability; a failing verdict certifies inseparability.
//!
//! Modules:
//! - [`linalg`]: Hermitian eigendecomposition and spectral matrix functions
//! - [`bipartite`]: shapes, tensor products, partial trace and transpose
//! - [`conditional`]: `ρ_{A|B}`, `S(A|B)` and the spectral criterion
//! - [`maps`]: Γ, Λ, Λ̃, M, their inverses, and the full criterion report
//! - [`qubit_geometry`]: Bloch and Hilbert-Schmidt geometry for two qubits
//! - [`states`]: named families, random ensembles, dilution

pub mod bipartite;
pub mod conditional;
pub mod error;
pub mod linalg;
pub mod maps;
pub mod qubit_geometry;
pub mod states;
pub mod tolerance;

pub use bipartite::{BipartiteShape, DensityOperator, Subsystem};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianOperator, Spectrum};
pub use maps::{Criterion, CriterionReport, CriterionVerdict, PositiveMap};
pub use tolerance::Tolerances;
