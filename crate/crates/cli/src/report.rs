use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use sepscope::conditional::conditional_amplitude;
use sepscope::maps::criterion_report;
use sepscope::qubit_geometry::{
    hs_decompose, t_state_region, HsDecomposition, TDiagonalVector, TStateRegion,
};
use sepscope::states::NamedStateSpec;
use sepscope::{BipartiteShape, CriterionVerdict, DensityOperator, Subsystem, Tolerances};

use crate::error::Result;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDescription {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<NamedStateSpec>,
    pub d_a: usize,
    pub d_b: usize,
}

impl StateDescription {
    pub fn named(spec: &NamedStateSpec, shape: BipartiteShape) -> Self {
        Self {
            label: spec.to_string(),
            spec: Some(spec.clone()),
            d_a: shape.d_a,
            d_b: shape.d_b,
        }
    }

    pub fn labelled(label: impl Into<String>, shape: BipartiteShape) -> Self {
        Self {
            label: label.into(),
            spec: None,
            d_a: shape.d_a,
            d_b: shape.d_b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TStateSummary {
    pub t: TDiagonalVector,
    pub region: TStateRegion,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub tool_version: String,
    pub state: StateDescription,
    pub tolerances: Tolerances,
    pub verdicts: Vec<CriterionVerdict>,
    pub certified_inseparable: bool,
    pub conditional_entropy_bits: f64,
    pub conditional_max_eigenvalue: f64,
    pub conditional_support_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hs_decomposition: Option<HsDecomposition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_state: Option<TStateSummary>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl AnalysisReport {
    pub fn build(rho: &DensityOperator, state: StateDescription, tol: &Tolerances) -> Result<Self> {
        let report = criterion_report(rho, tol)?;
        let amp = conditional_amplitude(rho, Subsystem::B, tol)?;
        let entropy = report
            .verdicts
            .iter()
            .find(|v| v.criterion == sepscope::Criterion::EntropicConditional)
            .map(|v| v.statistic)
            .unwrap_or(f64::NAN);
        let shape = rho.shape();
        let qubits = shape == BipartiteShape::qubits();
        let hs = if qubits {
            Some(hs_decompose(rho)?)
        } else {
            None
        };
        let t_state = hs
            .as_ref()
            .and_then(|d| d.t_diagonal(tol.criterion))
            .map(|t| TStateSummary {
                t,
                region: t_state_region(t, tol.criterion),
            });

        let mut notes = Vec::new();
        let small = shape.d_a * shape.d_b <= 6 && shape.d_a > 1 && shape.d_b > 1;
        if small {
            notes.push(format!(
                "in {shape} the lambda and partial-transpose criteria are also sufficient: passing them means separable"
            ));
        } else if !report.certified_inseparable {
            notes.push(format!(
                "all criteria pass, but in {shape} they are necessary and not sufficient: the state may still be inseparable"
            ));
        }
        if report.certified_inseparable {
            let failing: Vec<&str> = report.failing().map(|c| c.name()).collect();
            notes.push(format!("certified inseparable by: {}", failing.join(", ")));
        }

        Ok(Self {
            tool_version: TOOL_VERSION.to_string(),
            state,
            tolerances: *tol,
            verdicts: report.verdicts,
            certified_inseparable: report.certified_inseparable,
            conditional_entropy_bits: entropy,
            conditional_max_eigenvalue: amp.max_eigenvalue(),
            conditional_support_dim: amp.support_dim(),
            hs_decomposition: hs,
            t_state,
            notes,
        })
    }

    pub fn verdict(&self, name: &str) -> Option<&CriterionVerdict> {
        self.verdicts.iter().find(|v| v.criterion.name() == name)
    }

    pub fn exit_code(&self) -> i32 {
        if self.certified_inseparable {
            crate::EXIT_INSEPARABLE
        } else {
            crate::EXIT_PASS
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "state: {} ({}x{})",
            self.state.label, self.state.d_a, self.state.d_b
        );
        for v in &self.verdicts {
            let _ = writeln!(
                out,
                "  {:<22} {:<5} {:<28} {:+.12e}",
                v.criterion.name(),
                if v.passes { "pass" } else { "FAIL" },
                v.criterion.statistic_kind(),
                v.statistic
            );
        }
        let _ = writeln!(
            out,
            "  S(A|B) = {:+.12e} bits",
            self.conditional_entropy_bits
        );
        let _ = writeln!(
            out,
            "  max eig rho_A|B = {:.12e} (support dim {})",
            self.conditional_max_eigenvalue, self.conditional_support_dim
        );
        if let Some(hs) = &self.hs_decomposition {
            let _ = writeln!(out, "  r = {:?}", hs.r);
            let _ = writeln!(out, "  s = {:?}", hs.s);
            let _ = writeln!(out, "  t = {:?}", hs.t);
        }
        if let Some(ts) = &self.t_state {
            let _ = writeln!(out, "  T-diagonal {:?}: {:?}", ts.t.0, ts.region);
        }
        let _ = writeln!(
            out,
            "  certified inseparable: {}",
            if self.certified_inseparable {
                "yes"
            } else {
                "no"
            }
        );
        for note in &self.notes {
            let _ = writeln!(out, "  note: {note}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sepscope::states::StateFamily;

    #[test]
    fn json_round_trip_is_lossless() {
        let spec = NamedStateSpec::new(StateFamily::GisinMixture)
            .with("x", 0.37)
            .with("a", 0.3);
        let rho = spec.construct().unwrap();
        let report = AnalysisReport::build(
            &rho,
            StateDescription::named(&spec, rho.shape()),
            &Tolerances::default(),
        )
        .unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let back: AnalysisReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn werner_report_has_t_state() {
        let spec = NamedStateSpec::new(StateFamily::Werner).with("x", 0.5);
        let rho = spec.construct().unwrap();
        let report = AnalysisReport::build(
            &rho,
            StateDescription::named(&spec, rho.shape()),
            &Tolerances::default(),
        )
        .unwrap();
        let ts = report.t_state.clone().unwrap();
        assert_eq!(ts.region, TStateRegion::EntangledShell);
        assert_eq!(report.exit_code(), 2);
    }
}
