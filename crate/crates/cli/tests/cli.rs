//! End-to-end tests of the binary: exit codes, output shapes, round trips,
//! and determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

use degen_bell::table::TriangleTable;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_degen-bell"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn tmp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("degen-bell-test-{}-{name}", std::process::id()))
}

#[test]
fn stirling_classical_triangle_csv() {
    let out = run(&["stirling", "--nmax", "4", "--lambda", "0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("4,0,1,7,6,1"), "{text}");
    // padded lower-triangular rows
    assert!(text.contains("0,1,,,,"), "{text}");
}

#[test]
fn stirling_symbolic_triangle_mentions_coefficient_lists() {
    let out = run(&["stirling", "--nmax", "3", "--lambda", "sym"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("[3, -3]"), "{text}");
    let single = run(&["stirling", "--nmax", "0", "--lambda", "1/2"]);
    assert!(stdout(&single).contains("0,1"));
}

#[test]
fn stirling_tables_round_trip_through_files() {
    for (fmt, lambda) in [
        ("csv", "2/7"),
        ("json", "2/7"),
        ("csv", "sym"),
        ("json", "sym"),
    ] {
        let path = tmp_path(&format!("table-{fmt}-{}", lambda.replace('/', "_")));
        let out = run(&[
            "stirling",
            "--nmax",
            "5",
            "--r",
            "2",
            "--lambda",
            lambda,
            "--format",
            fmt,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        let text = std::fs::read_to_string(&path).unwrap();
        let parsed = match fmt {
            "csv" => TriangleTable::from_csv(&text).unwrap(),
            _ => TriangleTable::from_json(&text).unwrap(),
        };
        let expected = match lambda {
            "sym" => TriangleTable::symbolic(2, 5),
            other => TriangleTable::evaluated(2, degen_bell::parse_rat(other).unwrap(), 5),
        };
        assert_eq!(parsed, expected);
        std::fs::remove_file(&path).ok();
    }
}

#[test]
fn eval_families() {
    let out = run(&[
        "eval", "--family", "bell", "--n", "1", "--lambda", "1/2", "--x", "1",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "2/3");

    let out = run(&["eval", "--family", "phi", "--n", "3", "--x", "1"]);
    assert_eq!(stdout(&out).trim(), "5");

    let out = run(&[
        "eval",
        "--family",
        "bell-two-var",
        "--n",
        "2",
        "--lambda",
        "1/2",
        "--x",
        "1/3",
        "--y",
        "2",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.contains("omitted prefactor"),
        "normalized families must name the omitted prefactor: {text}"
    );

    let json = run(&[
        "eval",
        "--family",
        "fubini-classical",
        "--n",
        "3",
        "--x",
        "1",
        "--format",
        "json",
        "--float",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(doc["value"], "13");
    assert_eq!(doc["float"], 13.0);
}

#[test]
fn eval_error_exit_codes() {
    // normalization pole -> exit 2 with a message
    let out = run(&[
        "eval", "--family", "bell", "--n", "1", "--lambda", "-1", "--x", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("pole"));
    // zero denominator -> usage error from the value parser
    let out = run(&["eval", "--family", "bell", "--lambda", "1/0"]);
    assert_eq!(out.status.code(), Some(2));
    // unknown family
    let out = run(&["eval", "--family", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_default_run_passes_and_is_deterministic() {
    let report_a = tmp_path("report-a.json");
    let report_b = tmp_path("report-b.json");
    let args = |path: &PathBuf| {
        vec![
            "verify".to_string(),
            "--samples".into(),
            "6".into(),
            "--nmax".into(),
            "4".into(),
            "--m".into(),
            "4".into(),
            "--order".into(),
            "12".into(),
            "--seed".into(),
            "99".into(),
            "--out".into(),
            path.to_str().unwrap().into(),
        ]
    };
    let out_a = bin().args(args(&report_a)).output().unwrap();
    assert_eq!(
        out_a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out_a.stderr)
    );
    let out_b = bin().args(args(&report_b)).output().unwrap();
    assert_eq!(out_b.status.code(), Some(0));

    assert_eq!(out_a.stdout, out_b.stdout, "stdout must be byte-identical");
    let bytes_a = std::fs::read(&report_a).unwrap();
    let bytes_b = std::fs::read(&report_b).unwrap();
    assert_eq!(bytes_a, bytes_b, "reports must be byte-identical");

    let reports: serde_json::Value = serde_json::from_slice(&bytes_a).unwrap();
    let ids: Vec<&str> = reports
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["identity_id"].as_str().unwrap())
        .collect();
    assert!(
        ids.len() >= 9,
        "expected at least 9 identity ids, got {ids:?}"
    );
    assert!(reports
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["status"] == "pass"));
    std::fs::remove_file(&report_a).ok();
    std::fs::remove_file(&report_b).ok();
}

#[test]
fn verify_mutated_build_fails_with_counterexample() {
    let report = tmp_path("report-mutated.json");
    let out = run(&[
        "verify",
        "--samples",
        "6",
        "--nmax",
        "4",
        "--m",
        "4",
        "--order",
        "12",
        "--out",
        report.to_str().unwrap(),
        "--inject-mutation",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    let failing: Vec<&serde_json::Value> = doc
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["status"] == "fail")
        .collect();
    assert!(!failing.is_empty());
    for r in failing {
        let cx = &r["counterexample"];
        assert!(cx.is_object(), "failure without counterexample: {r}");
        assert!(cx["lhs"].is_string() && cx["rhs"].is_string());
    }
    std::fs::remove_file(&report).ok();
}

#[test]
fn verify_rejects_bad_config() {
    let out = run(&["verify", "--samples", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dobinski_demo_converges_and_guards_domain() {
    let out = run(&[
        "dobinski-demo",
        "--n",
        "3",
        "--lambda",
        "0",
        "--x",
        "1",
        "--k",
        "60",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("exact    = 5.000000000000000"), "{text}");
    assert!(text.contains("converged within tolerance"), "{text}");

    let out = run(&[
        "dobinski-demo",
        "--n",
        "2",
        "--lambda",
        "1/2",
        "--x",
        "1",
        "--k",
        "120",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("converged within tolerance"));

    // |lambda * x| >= 1 violates the domain guard
    let out = run(&["dobinski-demo", "--n", "2", "--lambda", "2", "--x", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("domain guard"));
}
