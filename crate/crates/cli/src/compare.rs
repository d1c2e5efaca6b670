//! Criterion comparison over seeded random ensembles.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use sepscope::maps::criterion_report;
use sepscope::states::{random_density, random_separable};
use sepscope::{BipartiteShape, Criterion, Tolerances};

use crate::error::{CliError, Result};

/// Largest composite dimension `compare` accepts.
pub const COMPARE_DIM_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ensemble {
    /// Ginibre states of the given rank (full rank when unset).
    Random { rank: Option<usize> },
    /// Convex mixtures of random product pure states.
    Separable { terms: usize },
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ensemble::Random { rank: None } => write!(f, "random full-rank"),
            Ensemble::Random { rank: Some(r) } => write!(f, "random rank-{r}"),
            Ensemble::Separable { terms } => write!(f, "separable {terms}-term"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareSummary {
    pub d_a: usize,
    pub d_b: usize,
    pub ensemble: Ensemble,
    pub samples: usize,
    pub seed: u64,
    pub criteria: Vec<Criterion>,
    pub failures: Vec<usize>,
    pub failure_fractions: Vec<f64>,
    /// `fail_pass[i][j]` counts samples failing `criteria[i]` while passing `criteria[j]`.
    pub fail_pass: Vec<Vec<usize>>,
    pub certified_inseparable: usize,
    /// Samples failing partial transposition on A while passing the spectral criterion.
    pub pt_fail_spectral_pass: usize,
}

impl CompareSummary {
    fn index(&self, c: Criterion) -> usize {
        self.criteria
            .iter()
            .position(|&x| x == c)
            .expect("every criterion is tabulated")
    }

    pub fn failures_of(&self, c: Criterion) -> usize {
        self.failures[self.index(c)]
    }

    pub fn fail_pass_count(&self, failing: Criterion, passing: Criterion) -> usize {
        self.fail_pass[self.index(failing)][self.index(passing)]
    }

    /// Samples on which exactly one of the two criteria fails.
    pub fn disagreements(&self, a: Criterion, b: Criterion) -> usize {
        self.fail_pass_count(a, b) + self.fail_pass_count(b, a)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{}x{} {}, {} samples, seed {}\n",
            self.d_a, self.d_b, self.ensemble, self.samples, self.seed
        );
        for (k, c) in self.criteria.iter().enumerate() {
            out.push_str(&format!(
                "  {:<22} fails {:>6} ({:.4})\n",
                c.name(),
                self.failures[k],
                self.failure_fractions[k]
            ));
        }
        out.push_str("  fail(row) & pass(col):\n");
        out.push_str(&format!("  {:<22}", ""));
        for c in &self.criteria {
            out.push_str(&format!(" {:>8}", short(*c)));
        }
        out.push('\n');
        for (i, c) in self.criteria.iter().enumerate() {
            out.push_str(&format!("  {:<22}", c.name()));
            for n in &self.fail_pass[i] {
                out.push_str(&format!(" {n:>8}"));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "  certified inseparable: {}\n  pt-a fails but spectral passes: {}\n",
            self.certified_inseparable, self.pt_fail_spectral_pass
        ));
        out
    }

    /// Long format: `row_criterion,column_criterion,count`, with failures on the diagonal.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("failing,passing,count\n");
        for (i, a) in self.criteria.iter().enumerate() {
            for (j, b) in self.criteria.iter().enumerate() {
                let n = if i == j {
                    self.failures[i]
                } else {
                    self.fail_pass[i][j]
                };
                out.push_str(&format!("{},{},{}\n", a.name(), b.name(), n));
            }
        }
        out
    }
}

fn short(c: Criterion) -> &'static str {
    match c {
        Criterion::Lambda => "lambda",
        Criterion::DualLambda => "dual",
        Criterion::Symmetric => "sym",
        Criterion::PartialTransposeA => "pt-a",
        Criterion::PartialTransposeB => "pt-b",
        Criterion::SpectralConditional => "spectral",
        Criterion::EntropicConditional => "entropic",
    }
}

/// Evaluates every criterion on `samples` states, the `i`-th seeded with `seed + i`.
pub fn run_compare(
    shape: BipartiteShape,
    ensemble: Ensemble,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<CompareSummary> {
    if shape.dim() > COMPARE_DIM_CAP {
        return Err(sepscope::Error::DimensionCap {
            dim: shape.dim(),
            cap: COMPARE_DIM_CAP,
        }
        .into());
    }
    if samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".to_string()));
    }
    let outcomes: Vec<Vec<bool>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i as u64);
            let rho = match ensemble {
                Ensemble::Random { rank } => {
                    random_density(shape.d_a, shape.d_b, rank.unwrap_or(shape.dim()), s)?
                }
                Ensemble::Separable { terms } => random_separable(shape.d_a, shape.d_b, terms, s)?,
            };
            let report = criterion_report(&rho, tol)?;
            Ok(Criterion::ALL
                .iter()
                .map(|&c| report.get(c).is_some_and(|v| v.fails()))
                .collect())
        })
        .collect::<Result<_>>()?;

    let n = Criterion::ALL.len();
    let mut failures = vec![0; n];
    let mut fail_pass = vec![vec![0; n]; n];
    let mut certified = 0;
    for fails in &outcomes {
        if fails.iter().any(|&f| f) {
            certified += 1;
        }
        for i in 0..n {
            if !fails[i] {
                continue;
            }
            failures[i] += 1;
            for j in 0..n {
                if !fails[j] {
                    fail_pass[i][j] += 1;
                }
            }
        }
    }
    let mut summary = CompareSummary {
        d_a: shape.d_a,
        d_b: shape.d_b,
        ensemble,
        samples,
        seed,
        criteria: Criterion::ALL.to_vec(),
        failure_fractions: failures
            .iter()
            .map(|&f| f as f64 / samples as f64)
            .collect(),
        failures,
        fail_pass,
        certified_inseparable: certified,
        pt_fail_spectral_pass: 0,
    };
    summary.pt_fail_spectral_pass =
        summary.fail_pass_count(Criterion::PartialTransposeA, Criterion::SpectralConditional);
    Ok(summary)
}
