//! Parameter sweeps over a named state family, emitted as CSV.
//!
//! Columns, in order: `param`, then one decision statistic per selected criterion
//! (in the order of [`Criterion::ALL`]), then `conditional_entropy_bits` and
//! `conditional_max_eigenvalue`.

use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use sepscope::conditional::conditional_amplitude;
use sepscope::maps::criterion_report;
use sepscope::states::NamedStateSpec;
use sepscope::{Criterion, Subsystem, Tolerances};

use crate::error::{CliError, Result};

/// Inclusive range `lo:hi:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamRange {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl ParamRange {
    /// Grid points `lo + k·step` up to `hi`, with `hi` itself kept when it is within
    /// a rounding error of the last step.
    pub fn points(&self) -> Vec<f64> {
        let span = (self.hi - self.lo) / self.step;
        let n = (span + 1e-9).floor() as usize;
        (0..=n).map(|k| self.lo + k as f64 * self.step).collect()
    }
}

impl FromStr for ParamRange {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, step] = parts.as_slice() else {
            return Err(CliError::Usage(format!(
                "range `{s}` must look like lo:hi:step"
            )));
        };
        let num = |t: &str, what: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| {
                    CliError::Usage(format!("range {what} `{t}` is not a finite number"))
                })
        };
        let range = Self {
            lo: num(lo, "start")?,
            hi: num(hi, "end")?,
            step: num(step, "step")?,
        };
        if range.step <= 0.0 {
            return Err(CliError::Usage(format!(
                "range step must be positive, got {}",
                range.step
            )));
        }
        if range.hi < range.lo {
            return Err(CliError::Usage(format!(
                "empty range: end {} is below start {}",
                range.hi, range.lo
            )));
        }
        Ok(range)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub param: f64,
    pub statistics: Vec<f64>,
    pub conditional_entropy_bits: f64,
    pub conditional_max_eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub vary: String,
    pub criteria: Vec<Criterion>,
    pub rows: Vec<SweepRow>,
}

pub fn run_sweep(
    base: &NamedStateSpec,
    vary: &str,
    range: ParamRange,
    criteria: &[Criterion],
    tol: &Tolerances,
) -> Result<Sweep> {
    let points = range.points();
    if points.is_empty() {
        return Err(CliError::Usage("empty range".to_string()));
    }
    let mut criteria = criteria.to_vec();
    criteria.sort();
    criteria.dedup();
    let rows = points
        .par_iter()
        .map(|&p| {
            let rho = base.clone().with(vary, p).construct()?;
            let report = criterion_report(&rho, tol)?;
            let amp = conditional_amplitude(&rho, Subsystem::B, tol)?;
            let stat = |c: Criterion| report.get(c).map(|v| v.statistic).unwrap_or(f64::NAN);
            Ok(SweepRow {
                param: p,
                statistics: criteria.iter().map(|&c| stat(c)).collect(),
                conditional_entropy_bits: stat(Criterion::EntropicConditional),
                conditional_max_eigenvalue: amp.max_eigenvalue(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Sweep {
        vary: vary.to_string(),
        criteria,
        rows,
    })
}

/// Twelve significant digits.
pub fn format_float(v: f64) -> String {
    // adding zero folds -0.0 into 0.0
    format!("{:.11e}", v + 0.0)
}

impl Sweep {
    pub fn header(&self) -> Vec<String> {
        let mut cols = vec![self.vary.clone()];
        cols.extend(self.criteria.iter().map(|c| c.name().to_string()));
        cols.push("conditional_entropy_bits".to_string());
        cols.push("conditional_max_eigenvalue".to_string());
        cols
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header().join(",");
        out.push('\n');
        for row in &self.rows {
            let mut cells = vec![format_float(row.param)];
            cells.extend(row.statistics.iter().map(|&v| format_float(v)));
            cells.push(format_float(row.conditional_entropy_bits));
            cells.push(format_float(row.conditional_max_eigenvalue));
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn column(&self, criterion: Criterion) -> Option<Vec<f64>> {
        let idx = self.criteria.iter().position(|&c| c == criterion)?;
        Some(self.rows.iter().map(|r| r.statistics[idx]).collect())
    }

    /// First parameter at which `fails` holds, given it does not hold at the start.
    pub fn first_crossing(&self, values: &[f64], fails: impl Fn(f64) -> bool) -> Option<f64> {
        self.rows
            .iter()
            .zip(values)
            .find(|(_, &v)| fails(v))
            .map(|(r, _)| r.param)
    }
}
