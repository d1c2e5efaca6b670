//! Conditional amplitude operator and conditional von Neumann entropy.
//!
//! For `ρ_AB` conditioned on B,
//!
//! ```text
//! ρ_{A|B} = exp[ log ρ_AB - log(1_A ⊗ ρ_B) ]
//! ```
//!
//! taken on the support of `ρ_AB` and zero on its kernel. Both logarithms are
//! support-restricted; the difference is compressed onto the support of `ρ_AB`
//! before exponentiation, which is the limit of the product form
//! `[ρ_AB^{1/n} (1_A ⊗ ρ_B)^{-1/n}]^n`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bipartite::{entropy_bits, tensor, DensityOperator, Subsystem};
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eig, matrix_function, reassemble, ComplexMatrix, HermitianOperator, Spectrum,
};
use crate::maps::{Criterion, CriterionVerdict};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalAmplitude {
    op: HermitianOperator,
    spectrum: Spectrum,
    support_dim: usize,
    max_eigenvalue: f64,
    conditioned_on: Subsystem,
    // orthonormal basis of the support of ρ_AB, with the logarithm of the
    // operator in that basis
    support_basis: ComplexMatrix,
    support_log: HermitianOperator,
}

impl ConditionalAmplitude {
    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    /// Full spectrum, including zeros on the kernel of `ρ_AB`.
    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn support_dim(&self) -> usize {
        self.support_dim
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.max_eigenvalue
    }

    pub fn conditioned_on(&self) -> Subsystem {
        self.conditioned_on
    }

    /// `-log` of the operator, restricted to the support (`σ_AB`), embedded in the full space.
    pub fn sigma(&self) -> HermitianOperator {
        let b = &self.support_basis;
        HermitianOperator::hermitize(b * self.support_log.matrix() * b.adjoint()).scale(-1.0)
    }
}

/// `1_A ⊗ ρ_B` (conditioned on B) or `ρ_A ⊗ 1_B` (conditioned on A), from a marginal.
fn embed_marginal(
    rho: &DensityOperator,
    conditioned_on: Subsystem,
    marginal: &HermitianOperator,
) -> HermitianOperator {
    let shape = rho.shape();
    match conditioned_on {
        Subsystem::B => tensor(&HermitianOperator::identity(shape.d_a), marginal),
        Subsystem::A => tensor(marginal, &HermitianOperator::identity(shape.d_b)),
    }
}

/// Checks that every kernel vector of the conditioning operator annihilates `ρ_AB`.
fn check_support_inclusion(
    rho: &DensityOperator,
    conditioning: &HermitianOperator,
    tol: &Tolerances,
) -> Result<()> {
    let (kernel, _) = hermitian_eig(conditioning).kernel(tol.rank);
    if kernel.ncols() == 0 {
        return Ok(());
    }
    let image = rho.op().matrix() * &kernel;
    let residual = image
        .column_iter()
        .map(|c| c.norm())
        .fold(0.0_f64, f64::max);
    if residual > tol.support {
        return Err(Error::SupportInconsistency {
            residual,
            tolerance: tol.support,
        });
    }
    Ok(())
}

pub fn conditional_amplitude(
    rho: &DensityOperator,
    conditioned_on: Subsystem,
    tol: &Tolerances,
) -> Result<ConditionalAmplitude> {
    let marginal = rho.marginal(conditioned_on);
    let conditioning = embed_marginal(rho, conditioned_on, &marginal);
    check_support_inclusion(rho, &conditioning, tol)?;

    let log_marginal = matrix_function(&marginal, f64::ln, true, tol.rank)?;
    let log_conditioning = embed_marginal(rho, conditioned_on, &log_marginal);

    let eig = hermitian_eig(rho.op());
    let (basis, values) = eig.support(tol.rank);
    let k = basis.ncols();
    if k == 0 {
        return Err(Error::Rank(format!(
            "state has no eigenvalue above rank tolerance {:e}",
            tol.rank
        )));
    }
    // log ρ_AB is diagonal in its own eigenbasis
    let mut compressed = -(basis.adjoint() * log_conditioning.matrix() * &basis);
    for (i, v) in values.iter().enumerate() {
        compressed[(i, i)] += Complex64::new(v.ln(), 0.0);
    }
    let support_log = HermitianOperator::hermitize(compressed);
    let exp_eig = hermitian_eig(&support_log);
    let exp_values: Vec<f64> = exp_eig.spectrum.values().iter().map(|v| v.exp()).collect();
    if exp_values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Rank(
            "conditional amplitude overflowed on the support".to_string(),
        ));
    }
    let embedded_vectors = &basis * &exp_eig.vectors;
    let op = reassemble(&embedded_vectors, &exp_values);

    let mut all = exp_values.clone();
    all.resize(rho.dim(), 0.0);
    let spectrum = Spectrum::from_unsorted(all);
    let max_eigenvalue = exp_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(ConditionalAmplitude {
        op,
        spectrum,
        support_dim: k,
        max_eigenvalue,
        conditioned_on,
        support_basis: basis,
        support_log,
    })
}

/// `-Tr[ρ_AB log₂ ρ_{A|B}]` over the support of `ρ_AB`, from an already computed amplitude.
fn entropy_from_amplitude(rho: &DensityOperator, amp: &ConditionalAmplitude) -> Result<f64> {
    let basis = &amp.support_basis;
    let restricted = HermitianOperator::hermitize(basis.adjoint() * amp.op.matrix() * basis);
    let log_amp = matrix_function(&restricted, f64::ln, false, 0.0)?;
    let rho_restricted = basis.adjoint() * rho.op().matrix() * basis;
    let tr = (rho_restricted * log_amp.matrix()).trace().re;
    Ok(-tr / std::f64::consts::LN_2)
}

/// Conditional von Neumann entropy in bits; `Subsystem::B` gives `S(A|B)`.
pub fn conditional_entropy(
    rho: &DensityOperator,
    conditioned_on: Subsystem,
    tol: &Tolerances,
) -> Result<f64> {
    let amp = conditional_amplitude(rho, conditioned_on, tol)?;
    entropy_from_amplitude(rho, &amp)
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(op: &HermitianOperator, rank_tol: f64) -> f64 {
    entropy_bits(&op.spectrum(), rank_tol)
}

/// `S(AB) - S(conditioning subsystem)` from eigenvalue entropies.
pub fn entropy_difference(rho: &DensityOperator, conditioned_on: Subsystem, rank_tol: f64) -> f64 {
    von_neumann_entropy(rho.op(), rank_tol)
        - von_neumann_entropy(&rho.marginal(conditioned_on), rank_tol)
}

/// Fails (certifies inseparability) iff the largest eigenvalue of the conditional
/// amplitude exceeds `1 + tol.criterion`.
pub fn spectral_criterion(
    rho: &DensityOperator,
    conditioned_on: Subsystem,
    tol: &Tolerances,
) -> Result<CriterionVerdict> {
    Ok(conditional_verdicts(rho, conditioned_on, tol)?.0)
}

/// Fails iff the conditional entropy is below `-tol.criterion`.
pub fn entropic_criterion(
    rho: &DensityOperator,
    conditioned_on: Subsystem,
    tol: &Tolerances,
) -> Result<CriterionVerdict> {
    Ok(conditional_verdicts(rho, conditioned_on, tol)?.1)
}

/// Spectral and entropic verdicts from a single amplitude computation.
pub fn conditional_verdicts(
    rho: &DensityOperator,
    conditioned_on: Subsystem,
    tol: &Tolerances,
) -> Result<(CriterionVerdict, CriterionVerdict)> {
    let amp = conditional_amplitude(rho, conditioned_on, tol)?;
    let bits = entropy_from_amplitude(rho, &amp)?;
    let spectral = CriterionVerdict::from_max_eigenvalue(
        Criterion::SpectralConditional,
        amp.spectrum.clone(),
        tol.criterion,
    );
    let entropic = CriterionVerdict::from_entropy(
        Criterion::EntropicConditional,
        bits,
        amp.spectrum,
        tol.criterion,
    );
    Ok((spectral, entropic))
}

/// Raw product `[ρ_AB^{1/n} (1_A ⊗ ρ_B)^{-1/n}]^n` and how far it is from Hermitian.
#[derive(Debug, Clone)]
pub struct TrotterApproximation {
    pub product: ComplexMatrix,
    pub steps: usize,
    pub hermiticity_defect: f64,
}

impl TrotterApproximation {
    pub fn distance_to(&self, target: &HermitianOperator) -> f64 {
        crate::linalg::max_abs_diff(&self.product, target.matrix())
    }
}

/// Product-form witness for [`conditional_amplitude`] (conditioned on B).
pub fn trotter_approximation(
    rho: &DensityOperator,
    n: usize,
    tol: &Tolerances,
) -> Result<TrotterApproximation> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n".to_string(),
            value: 0.0,
            bound: "must be at least 1".to_string(),
        });
    }
    let marginal = rho.marginal(Subsystem::B);
    let min_b = marginal.spectrum().min();
    if min_b <= tol.rank {
        return Err(Error::Rank(format!(
            "conditioning marginal is singular (min eigenvalue {min_b:e})"
        )));
    }
    let inv = 1.0 / n as f64;
    let root = matrix_function(rho.op(), |v| v.powf(inv), true, tol.rank)?;
    let neg_root_b = matrix_function(&marginal, |v| v.powf(-inv), false, tol.rank)?;
    let neg_root = embed_marginal(rho, Subsystem::B, &neg_root_b);
    let step = root.matrix() * neg_root.matrix();
    let dim = rho.dim();
    let mut product = DMatrix::<Complex64>::identity(dim, dim);
    for _ in 0..n {
        product = &product * &step;
    }
    let hermiticity_defect = crate::linalg::max_abs_diff(&product, &product.adjoint());
    Ok(TrotterApproximation {
        product,
        steps: n,
        hermiticity_defect,
    })
}
