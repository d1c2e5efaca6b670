//! The Γ map `X -> Tr(X)·1 - X` and its bipartite liftings.
//!
//! | map | lifting | image of a state |
//! |-----|---------|------------------|
//! | Λ   | Γ ⊗ I   | `1_A ⊗ ρ_B - ρ_AB` |
//! | Λ̃   | I ⊗ Γ   | `ρ_A ⊗ 1_B - ρ_AB` |
//! | M   | Γ ⊗ Γ   | `1 - ρ_A ⊗ 1_B - 1_A ⊗ ρ_B + ρ_AB` |
//!
//! Γ is positive, so each lifting sends separable states to positive operators;
//! a negative eigenvalue in the image certifies inseparability.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bipartite::{
    partial_trace, partial_transpose, tensor, BipartiteShape, DensityOperator, Subsystem,
};
use crate::conditional;
use crate::error::{Error, Result};
use crate::linalg::{HermitianOperator, Spectrum};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Criterion {
    Lambda,
    DualLambda,
    Symmetric,
    PartialTransposeA,
    PartialTransposeB,
    SpectralConditional,
    EntropicConditional,
}

impl Criterion {
    pub const ALL: [Criterion; 7] = [
        Criterion::Lambda,
        Criterion::DualLambda,
        Criterion::Symmetric,
        Criterion::PartialTransposeA,
        Criterion::PartialTransposeB,
        Criterion::SpectralConditional,
        Criterion::EntropicConditional,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::Lambda => "lambda",
            Criterion::DualLambda => "dual-lambda",
            Criterion::Symmetric => "symmetric",
            Criterion::PartialTransposeA => "pt-a",
            Criterion::PartialTransposeB => "pt-b",
            Criterion::SpectralConditional => "spectral-conditional",
            Criterion::EntropicConditional => "entropic-conditional",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }

    /// What the decision statistic is.
    pub fn statistic_kind(self) -> &'static str {
        match self {
            Criterion::SpectralConditional => "max eigenvalue",
            Criterion::EntropicConditional => "conditional entropy (bits)",
            _ => "min eigenvalue",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionVerdict {
    pub criterion: Criterion,
    pub statistic: f64,
    pub spectrum: Spectrum,
    pub passes: bool,
    pub tolerance: f64,
}

impl CriterionVerdict {
    /// Passes iff the minimum eigenvalue is at least `-tolerance`.
    pub fn from_min_eigenvalue(criterion: Criterion, spectrum: Spectrum, tolerance: f64) -> Self {
        let statistic = spectrum.min();
        Self {
            criterion,
            statistic,
            passes: statistic >= -tolerance,
            spectrum,
            tolerance,
        }
    }

    /// Passes iff the maximum eigenvalue is at most `1 + tolerance`.
    pub fn from_max_eigenvalue(criterion: Criterion, spectrum: Spectrum, tolerance: f64) -> Self {
        let statistic = spectrum.max();
        Self {
            criterion,
            statistic,
            passes: statistic <= 1.0 + tolerance,
            spectrum,
            tolerance,
        }
    }

    /// Passes iff the entropy is at least `-tolerance`.
    pub fn from_entropy(
        criterion: Criterion,
        bits: f64,
        spectrum: Spectrum,
        tolerance: f64,
    ) -> Self {
        Self {
            criterion,
            statistic: bits,
            passes: bits >= -tolerance,
            spectrum,
            tolerance,
        }
    }

    pub fn fails(&self) -> bool {
        !self.passes
    }
}

/// `(Tr X)·1 - X`.
pub fn gamma(x: &HermitianOperator) -> HermitianOperator {
    &HermitianOperator::identity(x.dim()).scale(x.trace()) - x
}

/// `Tr(Y)/(d-1)·1 - Y`, the inverse of [`gamma`] for `d > 1`.
pub fn gamma_inverse(y: &HermitianOperator) -> Result<HermitianOperator> {
    let d = y.dim();
    if d < 2 {
        return Err(Error::DegenerateShape {
            d_a: d,
            d_b: 1,
            reason: "Γ is not invertible in dimension 1",
        });
    }
    Ok(&HermitianOperator::identity(d).scale(y.trace() / (d - 1) as f64) - y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PositiveMap {
    Lambda,
    DualLambda,
    Symmetric,
}

impl PositiveMap {
    pub const ALL: [PositiveMap; 3] = [
        PositiveMap::Lambda,
        PositiveMap::DualLambda,
        PositiveMap::Symmetric,
    ];

    pub fn criterion(self) -> Criterion {
        match self {
            PositiveMap::Lambda => Criterion::Lambda,
            PositiveMap::DualLambda => Criterion::DualLambda,
            PositiveMap::Symmetric => Criterion::Symmetric,
        }
    }

    /// Applies the lifted map to an arbitrary operator of the given shape.
    pub fn apply(self, x: &HermitianOperator, shape: BipartiteShape) -> Result<HermitianOperator> {
        shape.check(x)?;
        let id_a = HermitianOperator::identity(shape.d_a);
        let id_b = HermitianOperator::identity(shape.d_b);
        Ok(match self {
            PositiveMap::Lambda => {
                let x_b = partial_trace(x, shape, Subsystem::A)?;
                &tensor(&id_a, &x_b) - x
            }
            PositiveMap::DualLambda => {
                let x_a = partial_trace(x, shape, Subsystem::B)?;
                &tensor(&x_a, &id_b) - x
            }
            PositiveMap::Symmetric => {
                let x_a = partial_trace(x, shape, Subsystem::B)?;
                let x_b = partial_trace(x, shape, Subsystem::A)?;
                let scalar = HermitianOperator::identity(shape.dim()).scale(x.trace());
                &(&(&scalar - &tensor(&x_a, &id_b)) - &tensor(&id_a, &x_b)) + x
            }
        })
    }

    pub fn inverse(
        self,
        y: &HermitianOperator,
        shape: BipartiteShape,
    ) -> Result<HermitianOperator> {
        shape.check(y)?;
        let need_a = matches!(self, PositiveMap::Lambda | PositiveMap::Symmetric);
        let need_b = matches!(self, PositiveMap::DualLambda | PositiveMap::Symmetric);
        if (need_a && shape.d_a < 2) || (need_b && shape.d_b < 2) {
            return Err(Error::DegenerateShape {
                d_a: shape.d_a,
                d_b: shape.d_b,
                reason: "Γ is not invertible on a one-dimensional factor",
            });
        }
        let ca = (shape.d_a as f64 - 1.0).recip();
        let cb = (shape.d_b as f64 - 1.0).recip();
        let id_a = HermitianOperator::identity(shape.d_a);
        let id_b = HermitianOperator::identity(shape.d_b);
        Ok(match self {
            PositiveMap::Lambda => {
                let y_b = partial_trace(y, shape, Subsystem::A)?;
                &tensor(&id_a, &y_b).scale(ca) - y
            }
            PositiveMap::DualLambda => {
                let y_a = partial_trace(y, shape, Subsystem::B)?;
                &tensor(&y_a, &id_b).scale(cb) - y
            }
            PositiveMap::Symmetric => {
                let y_a = partial_trace(y, shape, Subsystem::B)?;
                let y_b = partial_trace(y, shape, Subsystem::A)?;
                let scalar = HermitianOperator::identity(shape.dim()).scale(y.trace() * ca * cb);
                &(&(&scalar - &tensor(&y_a, &id_b).scale(cb)) - &tensor(&id_a, &y_b).scale(ca)) + y
            }
        })
    }
}

/// `λ_AB = 1_A ⊗ ρ_B - ρ_AB`.
pub fn lambda_map(rho: &DensityOperator) -> HermitianOperator {
    PositiveMap::Lambda
        .apply(rho.op(), rho.shape())
        .expect("shape validated at construction")
}

/// `λ̃_AB = ρ_A ⊗ 1_B - ρ_AB`.
pub fn dual_lambda_map(rho: &DensityOperator) -> HermitianOperator {
    PositiveMap::DualLambda
        .apply(rho.op(), rho.shape())
        .expect("shape validated at construction")
}

/// `μ_AB = 1 - ρ_A ⊗ 1_B - 1_A ⊗ ρ_B + ρ_AB`.
pub fn symmetric_map(rho: &DensityOperator) -> HermitianOperator {
    PositiveMap::Symmetric
        .apply(rho.op(), rho.shape())
        .expect("shape validated at construction")
}

/// `(d_A - 1)^{-1} (1_A ⊗ λ_B) - λ_AB`.
pub fn lambda_inverse(lam: &HermitianOperator, shape: BipartiteShape) -> Result<HermitianOperator> {
    PositiveMap::Lambda.inverse(lam, shape)
}

pub fn dual_lambda_inverse(
    lam: &HermitianOperator,
    shape: BipartiteShape,
) -> Result<HermitianOperator> {
    PositiveMap::DualLambda.inverse(lam, shape)
}

/// `Γ^{-1} ⊗ Γ^{-1}`; on images of unit-trace operators this is
/// `1 - (d_B-1)^{-1} μ_A ⊗ 1_B - (d_A-1)^{-1} 1_A ⊗ μ_B + μ_AB`.
pub fn symmetric_inverse(
    mu: &HermitianOperator,
    shape: BipartiteShape,
) -> Result<HermitianOperator> {
    PositiveMap::Symmetric.inverse(mu, shape)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub verdicts: Vec<CriterionVerdict>,
    pub certified_inseparable: bool,
}

impl CriterionReport {
    pub fn get(&self, criterion: Criterion) -> Option<&CriterionVerdict> {
        self.verdicts.iter().find(|v| v.criterion == criterion)
    }

    pub fn failing(&self) -> impl Iterator<Item = Criterion> + '_ {
        self.verdicts
            .iter()
            .filter(|v| v.fails())
            .map(|v| v.criterion)
    }
}

/// Evaluates every criterion. The conditional criteria condition on B.
pub fn criterion_report(rho: &DensityOperator, tol: &Tolerances) -> Result<CriterionReport> {
    let shape = rho.shape();
    let mut verdicts = Vec::with_capacity(Criterion::ALL.len());
    for map in PositiveMap::ALL {
        let image = map.apply(rho.op(), shape)?;
        verdicts.push(CriterionVerdict::from_min_eigenvalue(
            map.criterion(),
            image.spectrum(),
            tol.criterion,
        ));
    }
    for (criterion, side) in [
        (Criterion::PartialTransposeA, Subsystem::A),
        (Criterion::PartialTransposeB, Subsystem::B),
    ] {
        let pt = partial_transpose(rho.op(), shape, side)?;
        verdicts.push(CriterionVerdict::from_min_eigenvalue(
            criterion,
            pt.spectrum(),
            tol.criterion,
        ));
    }
    let (spectral, entropic) = conditional::conditional_verdicts(rho, Subsystem::B, tol)?;
    verdicts.push(spectral);
    verdicts.push(entropic);
    let certified_inseparable = verdicts.iter().any(CriterionVerdict::fails);
    Ok(CriterionReport {
        verdicts,
        certified_inseparable,
    })
}
