//! Command-line front end for `sepscope`.
//!
//! Exit codes: 0 when every criterion passes, 2 when the state (or, for `dilute`, the
//! diluted state) is certified inseparable, 1 on usage, parse or validation errors.

pub mod compare;
pub mod error;
pub mod matrix_file;
pub mod report;
pub mod sweep;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use sepscope::states::{dilute, NamedStateSpec, StateFamily};
use sepscope::{BipartiteShape, Criterion, DensityOperator, Tolerances};

use crate::compare::{run_compare, Ensemble};
use crate::error::{CliError, Result};
use crate::report::{AnalysisReport, StateDescription};
use crate::sweep::{run_sweep, ParamRange};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INSEPARABLE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "sepscope",
    version,
    about = "Separability criteria for bipartite quantum states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Criterion tolerance.
    #[arg(long, global = true, env = "SEPSCOPE_TOL", default_value_t = Tolerances::default().criterion)]
    pub tol: f64,

    /// Eigenvalues at or below this count as zero when taking supports.
    #[arg(long, global = true, default_value_t = Tolerances::default().rank)]
    pub rank_tol: f64,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

impl GlobalOpts {
    pub fn tolerances(&self) -> Result<Tolerances> {
        for (name, v) in [("--tol", self.tol), ("--rank-tol", self.rank_tol)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(CliError::Usage(format!(
                    "{name} must be a non-negative number, got {v}"
                )));
            }
        }
        Ok(Tolerances::default()
            .with_criterion(self.tol)
            .with_rank(self.rank_tol))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every criterion on one state.
    Analyze(SourceArgs),
    /// Sweep one parameter of a state family and print the decision statistics.
    Sweep(SweepArgs),
    /// Tabulate criterion failures over a random ensemble.
    Compare(CompareArgs),
    /// Tensor an inner state with an outer one and analyze all three.
    Dilute(DiluteArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// State family, e.g. werner, gisin-mixture, horodecki3x3, bell.
    #[arg(long, conflicts_with = "file")]
    pub state: Option<String>,

    /// Family parameter as key=value; repeatable.
    #[arg(long = "param", value_name = "K=V")]
    pub params: Vec<String>,

    /// JSON matrix file.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub state: String,

    /// Fixed parameters as key=value; repeatable.
    #[arg(long = "param", value_name = "K=V")]
    pub params: Vec<String>,

    /// Parameter to vary; defaults to the family's primary parameter.
    #[arg(long)]
    pub vary: Option<String>,

    #[arg(long, value_name = "LO:HI:STEP")]
    pub range: String,

    /// Comma-separated criterion names; all when omitted.
    #[arg(long, value_delimiter = ',')]
    pub criteria: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnsembleKind {
    Random,
    Separable,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// Shape as DAxDB.
    #[arg(long, default_value = "2x2")]
    pub dims: String,

    #[arg(long, default_value_t = 1000)]
    pub samples: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, value_enum, default_value_t = EnsembleKind::Random)]
    pub ensemble: EnsembleKind,

    /// Rank of random states; full rank when omitted.
    #[arg(long)]
    pub rank: Option<usize>,

    /// Number of product terms in separable samples.
    #[arg(long, default_value_t = 4)]
    pub terms: usize,
}

#[derive(Debug, Clone, Args)]
pub struct DiluteArgs {
    #[arg(long, conflicts_with = "inner_file")]
    pub inner: Option<String>,
    #[arg(long = "inner-param", value_name = "K=V")]
    pub inner_params: Vec<String>,
    #[arg(long)]
    pub inner_file: Option<PathBuf>,

    #[arg(long, conflicts_with = "outer_file")]
    pub outer: Option<String>,
    #[arg(long = "outer-param", value_name = "K=V")]
    pub outer_params: Vec<String>,
    #[arg(long)]
    pub outer_file: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DilutionReport {
    pub inner: AnalysisReport,
    pub outer: AnalysisReport,
    pub diluted: AnalysisReport,
}

/// Rendered output and exit code of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub exit_code: i32,
}

pub fn parse_params(pairs: &[String]) -> Result<Vec<(String, f64)>> {
    pairs
        .iter()
        .map(|p| {
            let (k, v) = p.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("parameter `{p}` must look like key=value"))
            })?;
            let value = v
                .trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("parameter `{k}`: `{v}` is not a number")))?;
            Ok((k.trim().to_string(), value))
        })
        .collect()
}

pub fn named_spec(state: &str, params: &[String]) -> Result<NamedStateSpec> {
    let family = StateFamily::parse(state).ok_or_else(|| {
        let known: Vec<&str> = StateFamily::ALL.iter().map(|f| f.name()).collect();
        CliError::Usage(format!(
            "unknown state `{state}`; known: {}",
            known.join(", ")
        ))
    })?;
    Ok(parse_params(params)?
        .into_iter()
        .fold(NamedStateSpec::new(family), |spec, (k, v)| spec.with(&k, v)))
}

fn load(
    state: Option<&str>,
    params: &[String],
    file: Option<&PathBuf>,
    tol: &Tolerances,
    flags: (&str, &str),
) -> Result<(DensityOperator, StateDescription)> {
    match (state, file) {
        (Some(name), None) => {
            let spec = named_spec(name, params)?;
            let rho = spec.construct()?;
            let desc = StateDescription::named(&spec, rho.shape());
            Ok((rho, desc))
        }
        (None, Some(path)) => {
            if !params.is_empty() {
                return Err(CliError::Usage(format!(
                    "parameters cannot be combined with {}",
                    flags.1
                )));
            }
            let rho = matrix_file::read_state(path, tol)?;
            let desc = StateDescription::labelled(path.display().to_string(), rho.shape());
            Ok((rho, desc))
        }
        _ => Err(CliError::Usage(format!(
            "give exactly one of {} or {}",
            flags.0, flags.1
        ))),
    }
}

pub fn parse_shape(s: &str) -> Result<BipartiteShape> {
    let bad = || CliError::Usage(format!("shape `{s}` must look like 2x3"));
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let d_a = a.trim().parse().map_err(|_| bad())?;
    let d_b = b.trim().parse().map_err(|_| bad())?;
    Ok(BipartiteShape::new(d_a, d_b)?)
}

fn analysis_csv(report: &AnalysisReport) -> String {
    let mut out = String::from("criterion,passes,statistic\n");
    for v in &report.verdicts {
        out.push_str(&format!(
            "{},{},{}\n",
            v.criterion.name(),
            v.passes,
            sweep::format_float(v.statistic)
        ));
    }
    out
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let tol = cli.global.tolerances()?;
    let format = cli.global.format;
    match &cli.command {
        Command::Analyze(args) => {
            let (rho, desc) = load(
                args.state.as_deref(),
                &args.params,
                args.file.as_ref(),
                &tol,
                ("--state", "--file"),
            )?;
            let report = AnalysisReport::build(&rho, desc, &tol)?;
            let output = match format.unwrap_or(Format::Text) {
                Format::Json => serde_json::to_string_pretty(&report)? + "\n",
                Format::Csv => analysis_csv(&report),
                Format::Text => report.to_text(),
            };
            Ok(Outcome {
                output,
                exit_code: report.exit_code(),
            })
        }
        Command::Sweep(args) => {
            let base = named_spec(&args.state, &args.params)?;
            let vary = match &args.vary {
                Some(v) => v.clone(),
                None => base
                    .name
                    .primary_param()
                    .ok_or_else(|| {
                        CliError::Usage(format!(
                            "`{}` has no default parameter; pass --vary",
                            base.name
                        ))
                    })?
                    .to_string(),
            };
            let range: ParamRange = args.range.parse()?;
            let criteria = if args.criteria.is_empty() {
                Criterion::ALL.to_vec()
            } else {
                args.criteria
                    .iter()
                    .map(|n| {
                        Criterion::from_name(n.trim())
                            .ok_or_else(|| CliError::Usage(format!("unknown criterion `{n}`")))
                    })
                    .collect::<Result<_>>()?
            };
            let sweep = run_sweep(&base, &vary, range, &criteria, &tol)?;
            let output = match format.unwrap_or(Format::Csv) {
                Format::Json => serde_json::to_string_pretty(&sweep)? + "\n",
                Format::Csv | Format::Text => sweep.to_csv(),
            };
            Ok(Outcome {
                output,
                exit_code: EXIT_PASS,
            })
        }
        Command::Compare(args) => {
            let shape = parse_shape(&args.dims)?;
            let ensemble = match args.ensemble {
                EnsembleKind::Random => Ensemble::Random { rank: args.rank },
                EnsembleKind::Separable => Ensemble::Separable { terms: args.terms },
            };
            let summary = run_compare(shape, ensemble, args.samples, args.seed, &tol)?;
            let output = match format.unwrap_or(Format::Text) {
                Format::Json => serde_json::to_string_pretty(&summary)? + "\n",
                Format::Csv => summary.to_csv(),
                Format::Text => summary.to_text(),
            };
            Ok(Outcome {
                output,
                exit_code: EXIT_PASS,
            })
        }
        Command::Dilute(args) => {
            let (inner, inner_desc) = load(
                args.inner.as_deref(),
                &args.inner_params,
                args.inner_file.as_ref(),
                &tol,
                ("--inner", "--inner-file"),
            )?;
            let (outer, outer_desc) = load(
                args.outer.as_deref(),
                &args.outer_params,
                args.outer_file.as_ref(),
                &tol,
                ("--outer", "--outer-file"),
            )?;
            let diluted = dilute(&inner, &outer)?;
            let diluted_desc = StateDescription::labelled(
                format!("{} (x) {}", inner_desc.label, outer_desc.label),
                diluted.shape(),
            );
            let report = DilutionReport {
                inner: AnalysisReport::build(&inner, inner_desc, &tol)?,
                outer: AnalysisReport::build(&outer, outer_desc, &tol)?,
                diluted: AnalysisReport::build(&diluted, diluted_desc, &tol)?,
            };
            let output = match format.unwrap_or(Format::Text) {
                Format::Json => serde_json::to_string_pretty(&report)? + "\n",
                Format::Csv => {
                    let mut out = String::from("state,criterion,passes,statistic\n");
                    for (tag, r) in [
                        ("inner", &report.inner),
                        ("outer", &report.outer),
                        ("diluted", &report.diluted),
                    ] {
                        for line in analysis_csv(r).lines().skip(1) {
                            out.push_str(&format!("{tag},{line}\n"));
                        }
                    }
                    out
                }
                Format::Text => format!(
                    "[inner]\n{}\n[outer]\n{}\n[diluted]\n{}",
                    report.inner.to_text(),
                    report.outer.to_text(),
                    report.diluted.to_text()
                ),
            };
            Ok(Outcome {
                output,
                exit_code: report.diluted.exit_code(),
            })
        }
    }
}
