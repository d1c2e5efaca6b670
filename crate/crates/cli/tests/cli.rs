use std::path::Path;
use std::process::Command;

use clap::Parser;

use sepscope::states::{self, NamedStateSpec, StateFamily};
use sepscope::{BipartiteShape, Criterion, Tolerances};
use sepscope_cli::compare::{run_compare, Ensemble};
use sepscope_cli::matrix_file::write_state;
use sepscope_cli::report::AnalysisReport;
use sepscope_cli::sweep::{run_sweep, ParamRange};
use sepscope_cli::{run, Cli, DilutionReport, Outcome};

fn invoke(args: &[&str]) -> Outcome {
    let cli = Cli::try_parse_from(std::iter::once("sepscope").chain(args.iter().copied())).unwrap();
    run(&cli).unwrap()
}

fn analyze_json(args: &[&str]) -> (AnalysisReport, i32) {
    let mut full = vec!["analyze", "--format", "json"];
    full.extend_from_slice(args);
    let out = invoke(&full);
    (serde_json::from_str(&out.output).unwrap(), out.exit_code)
}

fn binary() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sepscope"));
    cmd.env_remove("SEPSCOPE_TOL");
    cmd
}

#[test]
fn werner_half_is_certified_inseparable() {
    let (report, code) = analyze_json(&["--state", "werner", "--param", "x=0.5"]);
    assert!(report.certified_inseparable);
    assert_eq!(code, 2);
    let lambda = report.verdict("lambda").unwrap();
    assert!((lambda.statistic + 0.125).abs() < 1e-12);
    assert!(!lambda.passes);
}

#[test]
fn werner_quarter_passes_everything() {
    let (report, code) = analyze_json(&["--state", "werner", "--param", "x=0.25"]);
    assert!(!report.certified_inseparable);
    assert_eq!(code, 0);
    assert!(report.verdicts.iter().all(|v| v.passes));
}

#[test]
fn bound_entangled_3x3_passes_with_note() {
    let (report, code) = analyze_json(&["--state", "horodecki3x3", "--param", "a=0.5"]);
    assert!(!report.certified_inseparable);
    assert_eq!(code, 0);
    assert!(
        report.notes.iter().any(|n| n.contains("not sufficient")),
        "{:?}",
        report.notes
    );
}

#[test]
fn analysis_json_round_trips() {
    for args in [
        &["--state", "werner", "--param", "x=0.7"][..],
        &["--state", "horodecki2x4", "--param", "b=0.3"][..],
        &["--state", "gisin", "--param", "x=0.4", "--param", "a=0.6"][..],
    ] {
        let (report, _) = analyze_json(args);
        let again: AnalysisReport =
            serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
        assert_eq!(again, report);
    }
}

#[test]
fn matrix_file_matches_named_state() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gisin.json");
    let spec = NamedStateSpec::new(StateFamily::GisinMixture).with("x", 0.6);
    write_state(&path, &spec.construct().unwrap()).unwrap();
    let (from_file, code_file) = analyze_json(&["--file", path.to_str().unwrap()]);
    let (named, code_named) = analyze_json(&["--state", "gisin-mixture", "--param", "x=0.6"]);
    assert_eq!(code_file, code_named);
    for (a, b) in from_file.verdicts.iter().zip(&named.verdicts) {
        assert_eq!(a.criterion, b.criterion);
        assert!((a.statistic - b.statistic).abs() < 1e-12);
    }
}

#[test]
fn werner_sweep_crossings() {
    let spec = NamedStateSpec::new(StateFamily::Werner);
    let range: ParamRange = "0:1:0.01".parse().unwrap();
    let sweep = run_sweep(&spec, "x", range, &Criterion::ALL, &Tolerances::default()).unwrap();
    assert_eq!(sweep.rows.len(), 101);

    let lambda = sweep.column(Criterion::Lambda).unwrap();
    let x_lambda = sweep.first_crossing(&lambda, |v| v < 0.0).unwrap();
    assert!((x_lambda - 1.0 / 3.0).abs() <= 0.01 + 1e-12, "{x_lambda}");

    let amp: Vec<f64> = sweep
        .rows
        .iter()
        .map(|r| r.conditional_max_eigenvalue)
        .collect();
    let x_amp = sweep.first_crossing(&amp, |v| v > 1.0).unwrap();
    let entropy: Vec<f64> = sweep
        .rows
        .iter()
        .map(|r| r.conditional_entropy_bits)
        .collect();
    let x_entropy = sweep.first_crossing(&entropy, |v| v < 0.0).unwrap();
    assert!(x_entropy > x_amp, "{x_entropy} vs {x_amp}");

    // S(A|B) < 0 exactly where S(AB) < S(B) = 1.
    let rho = states::werner(x_entropy).unwrap();
    let s_ab = sepscope::conditional::von_neumann_entropy(rho.op(), 1e-12);
    assert!(s_ab < 1.0);
    let before = states::werner(x_entropy - 0.01).unwrap();
    assert!(sepscope::conditional::von_neumann_entropy(before.op(), 1e-12) >= 1.0);
}

#[test]
fn gisin_sweep_crosses_at_one_half() {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let spec = NamedStateSpec::new(StateFamily::GisinMixture)
        .with("a", s)
        .with("b", s);
    let range: ParamRange = "0:1:0.01".parse().unwrap();
    let sweep = run_sweep(
        &spec,
        "x",
        range,
        &[Criterion::Lambda],
        &Tolerances::default(),
    )
    .unwrap();
    let lambda = sweep.column(Criterion::Lambda).unwrap();
    let x = sweep.first_crossing(&lambda, |v| v < 0.0).unwrap();
    assert!((x - 0.5).abs() <= 0.01 + 1e-12, "{x}");
}

#[test]
fn sweep_csv_header_is_stable() {
    let out = invoke(&["sweep", "--state", "werner", "--range", "0:0.5:0.25"]);
    let mut lines = out.output.lines();
    assert_eq!(
        lines.next().unwrap(),
        "x,lambda,dual-lambda,symmetric,pt-a,pt-b,spectral-conditional,entropic-conditional,\
         conditional_entropy_bits,conditional_max_eigenvalue"
    );
    assert_eq!(lines.count(), 3);
}

#[test]
fn sweep_criteria_filter_keeps_canonical_order() {
    let out = invoke(&[
        "sweep",
        "--state",
        "werner",
        "--range",
        "0:1:0.5",
        "--criteria",
        "pt-a,lambda",
    ]);
    assert!(out
        .output
        .starts_with("x,lambda,pt-a,conditional_entropy_bits"));
}

#[test]
fn compare_two_qubits_is_consistent() {
    let summary = run_compare(
        BipartiteShape::qubits(),
        Ensemble::Random { rank: None },
        1000,
        2024,
        &Tolerances::default(),
    )
    .unwrap();
    assert_eq!(
        summary.disagreements(Criterion::Lambda, Criterion::PartialTransposeA),
        0
    );
    assert_eq!(
        summary.fail_pass_count(Criterion::SpectralConditional, Criterion::Lambda),
        0
    );
    assert_eq!(
        summary.fail_pass_count(Criterion::EntropicConditional, Criterion::Lambda),
        0
    );
    assert!(summary.failures_of(Criterion::Lambda) > 0);
}

#[test]
fn compare_separable_ensembles_never_fail() {
    for (d_a, d_b) in [(2, 2), (2, 3), (3, 3)] {
        let summary = run_compare(
            BipartiteShape::new(d_a, d_b).unwrap(),
            Ensemble::Separable { terms: 5 },
            150,
            11,
            &Tolerances::default(),
        )
        .unwrap();
        assert_eq!(summary.certified_inseparable, 0, "{d_a}x{d_b}");
    }
}

#[test]
fn dilution_masks_singlet_signatures() {
    let out = invoke(&[
        "dilute",
        "--format",
        "json",
        "--inner",
        "singlet",
        "--outer",
        "maximally-mixed",
    ]);
    let report: DilutionReport = serde_json::from_str(&out.output).unwrap();
    let spectral = |r: &AnalysisReport| r.verdict("spectral-conditional").unwrap().clone();
    let lambda = |r: &AnalysisReport| r.verdict("lambda").unwrap().clone();

    assert!((spectral(&report.inner).statistic - 2.0).abs() < 1e-9);
    assert!(!spectral(&report.inner).passes);
    assert!(!lambda(&report.inner).passes);

    assert!((spectral(&report.diluted).statistic - 1.0).abs() < 1e-9);
    assert!(spectral(&report.diluted).passes);
    assert!(lambda(&report.diluted).statistic.abs() < 1e-9);
    assert!(lambda(&report.diluted).passes);
    assert_eq!(report.diluted.state.d_a, 4);
}

#[test]
fn dilution_of_products_passes_everything() {
    let out = invoke(&[
        "dilute",
        "--format",
        "json",
        "--inner",
        "product-pure",
        "--inner-param",
        "theta_a=0.4",
        "--inner-param",
        "theta_b=1.1",
        "--outer",
        "product-pure",
        "--outer-param",
        "phi_a=0.3",
        "--outer-param",
        "theta_b=2.0",
    ]);
    assert_eq!(out.exit_code, 0);
    let report: DilutionReport = serde_json::from_str(&out.output).unwrap();
    for r in [&report.inner, &report.outer, &report.diluted] {
        assert!(r.verdicts.iter().all(|v| v.passes), "{}", r.state.label);
    }
}

#[test]
fn binary_exit_codes() {
    let status = |args: &[&str]| binary().args(args).output().unwrap().status.code().unwrap();
    assert_eq!(
        status(&["analyze", "--state", "werner", "--param", "x=0.25"]),
        0
    );
    assert_eq!(
        status(&["analyze", "--state", "werner", "--param", "x=0.5"]),
        2
    );
    assert_eq!(
        status(&["analyze", "--state", "werner", "--param", "x=2"]),
        1
    );
    assert_eq!(status(&["analyze", "--state", "no-such-state"]), 1);
    assert_eq!(status(&["analyze", "--no-such-flag"]), 1);
    assert_eq!(
        status(&["sweep", "--state", "werner", "--range", "1:0:0.1"]),
        1
    );
    assert_eq!(
        status(&["dilute", "--inner", "singlet", "--outer", "maximally-mixed"]),
        2
    );
    assert_eq!(status(&["--help"]), 0);
}

#[test]
fn tolerance_from_environment() {
    // Werner at 1/3 + 1e-7 has lambda minimum -7.5e-8: fails at the default, passes at 1e-6.
    let x = format!("x={}", 1.0 / 3.0 + 1e-7);
    let run = |tol: Option<&str>| {
        let mut cmd = binary();
        if let Some(t) = tol {
            cmd.env("SEPSCOPE_TOL", t);
        }
        cmd.args([
            "analyze", "--state", "werner", "--param", &x, "--format", "json",
        ])
        .output()
        .unwrap()
    };
    let strict = run(None);
    assert_eq!(strict.status.code(), Some(2));
    let loose = run(Some("1e-6"));
    assert_eq!(loose.status.code(), Some(0));
    let report: AnalysisReport = serde_json::from_slice(&loose.stdout).unwrap();
    assert_eq!(report.tolerances.criterion, 1e-6);
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn malformed_file_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    write(&path, "{\"dims\": [2, 2],\n \"matrix\": [[[1, 0], oops]]}");
    let out = binary()
        .args(["analyze", "--file", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn invalid_matrix_names_the_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nonherm.json");
    let rows: Vec<String> = (0..4)
        .map(|i| {
            let cells: Vec<String> = (0..4)
                .map(|j| match (i, j) {
                    (i, j) if i == j => "[0.25, 0]".to_string(),
                    (0, 1) => "[0.1, 0]".to_string(),
                    _ => "[0, 0]".to_string(),
                })
                .collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    write(
        &path,
        &format!("{{\"dims\": [2, 2], \"matrix\": [{}]}}", rows.join(", ")),
    );
    let out = binary()
        .args(["analyze", "--file", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.to_lowercase().contains("hermitian"), "{err}");
}
