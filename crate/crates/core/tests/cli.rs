//! End-to-end runs of the `diagcat` binary: reports and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

use diagcat::arith::q;
use diagcat::realize::{frobenius_line_model, ModelFile};

fn diagcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diagcat")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("diagcat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn factorials() -> String {
    concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/factorials.txt").to_string()
}

#[test]
fn gram_csv_lists_ranks_per_point() {
    let o = diagcat(&["gram", "--preset", "gl", "--pq", "2,2", "--t", "generic", "--t", "1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "p,q,generic,1\n2,2,2,1\n");
}

#[test]
fn homdims_json_envelope() {
    let o = diagcat(&["homdims", "--preset", "orth", "--pq", "2,2", "--t", "generic", "--t", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["tool"], "diagcat");
    assert_eq!(v["command"], "homdims");
    assert_eq!(v["outcome"], "ok");
    assert!(v["config"].is_object());
}

#[test]
fn loyal_series_exits_zero() {
    let o = diagcat(&["loyal", "--alpha", "1,2,0,0,0,0,0,0", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("terms,numerator,denominator,good,loyal\n"), "{out}");
    assert!(out.trim_end().ends_with("2*X + 1,1,false,true"), "{out}");
}

#[test]
fn factorial_goodness_fails_with_exit_two() {
    let o = diagcat(&["goodness", "--preset", "frobenius", "--alpha-file", &factorials()]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["outcome"], "fail");
    assert!(v.to_string().contains("Hankel"));
}

#[test]
fn good_frobenius_passes() {
    let o = diagcat(&["goodness", "--preset", "frobenius", "--alpha", "0,2,0,0,0,0,0,0,0,0,0,0,0,0"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn budget_overflow_exits_three() {
    let o = diagcat(&[
        "homdims", "--preset", "sym", "--enumerator", "generic", "--max-boxes", "14", "--pq", "3,3", "--t", "3",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn malformed_literal_exits_one() {
    let o = diagcat(&["chareval", "--preset", "gl", "--diagram", "nonsense"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn config_file_and_flag_override() {
    let cfg = scratch("gram.json");
    std::fs::write(
        &cfg,
        r#"{"command": "gram", "preset": "sym", "t": ["0"], "cutoffs": {"pq_list": [[1, 1]]}, "format": "csv"}"#,
    )
    .unwrap();
    let o = diagcat(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "p,q,0\n1,1,0\n");
    let o = diagcat(&["gram", "--config", cfg.to_str().unwrap(), "--t", "3"]);
    assert_eq!(stdout(&o), "p,q,3\n1,1,2\n");
}

#[test]
fn model_file_character_and_out_path() {
    let path = scratch("line.json");
    ModelFile::from_model(&frobenius_line_model(&q(3)).unwrap()).save(&path).unwrap();
    let out = scratch("eval.csv");
    let o = diagcat(&[
        "chareval",
        "--model-file",
        path.to_str().unwrap(),
        "--diagram",
        "boxes: [u#0, eps#0]; wires: [(u#0.out[0], eps#0.in[0])]; in: 0; out: 0",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.trim_end().ends_with(",1/3"), "{text}");
}

#[test]
fn presets_are_listed() {
    let o = diagcat(&["presets", "list", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for name in ["gl", "orth", "sym", "symp", "frobenius", "endo", "dvr", "wreath"] {
        assert!(out.lines().any(|l| l.starts_with(&format!("{name},"))), "{name} missing from\n{out}");
    }
}
