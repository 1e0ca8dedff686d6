use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use qmap::mapio::MapDocument;
use serde_json::Value;

fn qmap(args: &[&str], stdin: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qmap"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn gen_to(dir: &Path, file: &str, args: &[&str]) -> String {
    let path = dir.join(file);
    let path_str = path.to_str().unwrap().to_string();
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &path_str]);
    assert_eq!(qmap(&full, b"").status.code(), Some(0));
    path_str
}

#[test]
fn gen_transpose_piped_into_analyze() {
    let generated = qmap(&["gen", "transpose"], b"");
    assert_eq!(generated.status.code(), Some(0));
    let report = qmap(&["analyze"], &generated.stdout);
    assert_eq!(report.status.code(), Some(0));
    let text = stdout(&report);
    assert!(text.contains("hermiticity preserving: true"), "{text}");
    assert!(text.contains("completely positive: false"), "{text}");
    assert!(text.contains("trace preserving: true"), "{text}");
    assert!(text.contains("signature (p, q, z): (3, 1, 0)"), "{text}");
    assert!(text.contains("choi eigenvalues: 1 1 1 -1"), "{text}");
}

#[test]
fn equiv_against_seeded_transform() {
    let dir = tempfile::tempdir().unwrap();
    let a = gen_to(
        dir.path(),
        "a.qmap.json",
        &[
            "random_hp",
            "--dim",
            "3",
            "--p",
            "2",
            "--q",
            "2",
            "--seed",
            "4",
        ],
    );
    let b = dir.path().join("b.qmap.json");
    let b = b.to_str().unwrap();
    assert_eq!(
        qmap(&["transform", &a, "--seed", "9", "--out", b], b"")
            .status
            .code(),
        Some(0)
    );
    let w = dir.path().join("w.json");
    let out = qmap(&["equiv", &a, b, "--out", w.to_str().unwrap()], b"");
    assert_eq!(out.status.code(), Some(0));
    assert!(
        stdout(&out).starts_with("equivalent, witness in U(2, 2)"),
        "{}",
        stdout(&out)
    );
    let witness: Value = serde_json::from_str(&std::fs::read_to_string(&w).unwrap()).unwrap();
    assert_eq!(witness["metric"]["p"], 2);
    assert_eq!(witness["metric"]["q"], 2);
    qmap::mapio::matrix_from_value(witness["u"].clone()).unwrap();
}

#[test]
fn equiv_identity_versus_transpose() {
    let dir = tempfile::tempdir().unwrap();
    let i = gen_to(dir.path(), "i.qmap.json", &["identity"]);
    let t = gen_to(dir.path(), "t.qmap.json", &["transpose"]);
    let out = qmap(&["equiv", &i, &t], b"");
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("not equivalent, Choi distance "));

    let json = qmap(&["equiv", &i, &t, "--format", "json"], b"");
    assert_eq!(json.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["verdict"], "not_equivalent");
}

#[test]
fn json_outputs_are_single_documents() {
    let dir = tempfile::tempdir().unwrap();
    let d = gen_to(dir.path(), "d.qmap.json", &["depolarizing", "--p", "0.25"]);
    let analyze = qmap(&["analyze", &d, "--format", "json"], b"");
    let v: Value = serde_json::from_slice(&analyze.stdout).unwrap();
    assert_eq!(v["completely_positive"], true);
    assert_eq!(v["signature"]["q"], 0);

    let decompose = qmap(&["decompose", &d, "--format", "json"], b"");
    let v: Value = serde_json::from_slice(&decompose.stdout).unwrap();
    MapDocument::from_json_str(&v["plus"].to_string()).unwrap();
    MapDocument::from_json_str(&v["minus"].to_string()).unwrap();
}

#[test]
fn convert_and_extract_preserve_the_map() {
    let dir = tempfile::tempdir().unwrap();
    let t = gen_to(dir.path(), "t.qmap.json", &["transpose", "--dim", "3"]);
    let superop = qmap(&["convert", &t, "--to", "superop"], b"");
    assert_eq!(superop.status.code(), Some(0));
    let choi = qmap(&["convert", "-", "--to", "choi"], &superop.stdout);
    let extracted = qmap(&["extract"], &choi.stdout);
    assert_eq!(extracted.status.code(), Some(0));
    let report = qmap(&["analyze", "--format", "json"], &extracted.stdout);
    let v: Value = serde_json::from_slice(&report.stdout).unwrap();
    assert_eq!(v["signature"]["p"], 6);
    assert_eq!(v["signature"]["q"], 3);
}

#[test]
fn apply_reports_output_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let t = gen_to(dir.path(), "t.qmap.json", &["transpose"]);
    let rho = dir.path().join("rho.json");
    std::fs::write(
        &rho,
        r#"{"rows": 2, "cols": 2, "data": [[0.5, 0.0], [0.0, 0.5], [0.0, -0.5], [0.5, 0.0]]}"#,
    )
    .unwrap();
    let out = qmap(
        &["apply", &t, rho.to_str().unwrap(), "--format", "json"],
        b"",
    );
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let m = qmap::mapio::matrix_from_value(v["output"].clone()).unwrap();
    assert!((m[(0, 1)].im + 0.5).abs() < 1e-12);
    assert!((v["trace"][0].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(qmap(&["analyze", "--bogus"], b"").status.code(), Some(2));
    assert_eq!(qmap(&["frobnicate"], b"").status.code(), Some(2));
    assert_eq!(qmap(&[], b"").status.code(), Some(2));
}

#[test]
fn input_errors_exit_3() {
    let out = qmap(&["analyze"], b"{ not json");
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
    assert_eq!(
        qmap(&["analyze", "/nonexistent/x.qmap.json"], b"")
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        qmap(&["gen", "no_such_fixture"], b"").status.code(),
        Some(3)
    );
}

#[test]
fn analyze_accepts_every_fixture() {
    let cases: &[&[&str]] = &[
        &["identity", "--dim", "3"],
        &["transpose", "--dim", "4"],
        &["depolarizing", "--p", "1.5"],
        &["completely_depolarizing"],
        &["amplitude_damping", "--gamma", "0.4"],
        &["random_hp", "--p", "2", "--q", "1"],
    ];
    for args in cases {
        let mut full = vec!["gen"];
        full.extend_from_slice(args);
        let generated = qmap(&full, b"");
        assert_eq!(generated.status.code(), Some(0), "{args:?}");
        assert_eq!(
            qmap(&["analyze"], &generated.stdout).status.code(),
            Some(0),
            "{args:?}"
        );
    }
}

#[test]
fn commands_are_deterministic() {
    let a = qmap(
        &[
            "gen",
            "random_hp",
            "--dim",
            "3",
            "--p",
            "3",
            "--q",
            "1",
            "--seed",
            "5",
        ],
        b"",
    );
    let b = qmap(
        &[
            "gen",
            "random_hp",
            "--dim",
            "3",
            "--p",
            "3",
            "--q",
            "1",
            "--seed",
            "5",
        ],
        b"",
    );
    assert_eq!(a.stdout, b.stdout);
    let t1 = qmap(&["transform", "--seed", "3"], &a.stdout);
    let t2 = qmap(&["transform", "--seed", "3"], &a.stdout);
    assert_eq!(t1.stdout, t2.stdout);
    let t3 = qmap(&["transform", "--seed", "4"], &a.stdout);
    assert_ne!(t1.stdout, t3.stdout);
}
