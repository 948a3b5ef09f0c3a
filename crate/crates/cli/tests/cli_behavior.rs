//! End-to-end behavior of the `semiflow` binary: exit codes, diagnostics,
//! output artifacts, determinism, and the report summary. Every invocation
//! strips `SEMIFLOW_SEED` from the environment so tests stay hermetic.

use std::path::Path;
use std::process::{Command, Output};

fn semiflow() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_semiflow"));
    cmd.env_remove("SEMIFLOW_SEED");
    cmd
}

fn run(args: &[&str]) -> Output {
    semiflow().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).to_string()
}

fn write_spec(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().to_string()
}

const LOG_LINE: &str = r#"{"label":"log_line","tails":[{"re":{"log":{"c":-1.0,"p":1.0}},
"im":{"power":{"c":1.0,"p":1.0}},"n0":1,"mult":1}]}"#;

const VERTICAL_LINE: &str = r#"{"label":"vertical_line","tails":[{"re":{"constant":{"c":-1.0}},
"im":{"power":{"c":1.0,"p":1.0}},"n0":1,"mult":1}]}"#;

const HALF_PLANE: &str = r#"{"label":"half_plane","regions":[{"half_plane":{"omega":-1.0}}]}"#;

// ── classify ────────────────────────────────────────────────────────────────

#[test]
fn classify_reports_the_log_line_onset() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "logline.spec", LOG_LINE);
    let out = run(&["classify", &spec]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));

    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["format_version"], 1);
    assert_eq!(doc["label"], "log_line");
    let verdicts = doc["verdicts"].as_array().unwrap();
    let ev = verdicts
        .iter()
        .find(|v| v["kind"] == "eventual_differentiability")
        .unwrap();
    assert_eq!(ev["answer"], "yes");
    assert_eq!(ev["witness"]["params"]["b"], 1.0);
    assert_eq!(ev["witness"]["params"]["t0"], 1.0);
    let imm = verdicts
        .iter()
        .find(|v| v["kind"] == "immediate_differentiability")
        .unwrap();
    assert_eq!(imm["answer"], "no");
}

#[test]
fn classify_missing_file_is_an_input_error() {
    let out = run(&["classify", "definitely_missing.spec"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("file not found"), "stderr: {}", stderr(&out));
}

#[test]
fn classify_rejects_garbage_input() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "broken.spec", "{not json");
    let out = run(&["classify", &spec]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("broken.spec"));
}

#[test]
fn classify_restricts_gevrey_orders_to_the_requested_list() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "logline.spec", LOG_LINE);
    let out = run(&["classify", "--beta", "1,2", &spec]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let betas: Vec<f64> = doc["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|v| v["kind"] == "gevrey_roumieu")
        .map(|v| v["beta"].as_f64().unwrap())
        .collect();
    assert_eq!(betas, vec![1.0, 2.0]);
    assert_eq!(doc["environment"]["betas"], serde_json::json!([1.0, 2.0]));
}

#[test]
fn classify_rejects_gevrey_orders_below_one() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "logline.spec", LOG_LINE);
    let out = run(&["classify", "--beta", "0.5", &spec]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classify_text_format_renders_sections() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "logline.spec", LOG_LINE);
    let out = run(&["classify", "--format", "text", &spec]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("verdicts"));
    assert!(text.contains("consistency"));
    assert!(text.contains("eventual_differentiability"));
}

// ── probe ───────────────────────────────────────────────────────────────────

#[test]
fn probe_on_a_region_only_spec_is_a_capability_error() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "halfplane.spec", HALF_PLANE);
    let out = run(&["probe", &spec]);
    assert_eq!(out.status.code(), Some(3));
    assert!(
        stderr(&out).contains("probes require point spectra"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn probe_writes_report_and_curves_and_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "vertline.spec", VERTICAL_LINE);
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");

    for out_dir in [&out_a, &out_b] {
        let out = run(&[
            "probe",
            &spec,
            "--N",
            "64,128",
            "--seed",
            "7",
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "stderr: {}", stderr(&out));
    }

    for name in ["vertical_line.report.json", "vertical_line.curves.csv"] {
        let a = std::fs::read(out_a.join(name)).unwrap();
        let b = std::fs::read(out_b.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }

    let csv = std::fs::read_to_string(out_a.join("vertical_line.curves.csv")).unwrap();
    assert!(csv.starts_with("series,t_or_h_or_N,value\n"));
    let report = std::fs::read_to_string(out_a.join("vertical_line.report.json")).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!(doc["environment"]["probe"]["seed"], 7);
    assert_eq!(doc["environment"]["probe"]["n_schedule"], serde_json::json!([64, 128]));
}

#[test]
fn probe_seed_comes_from_the_environment_when_not_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "vertline.spec", VERTICAL_LINE);

    let flagged = run(&["probe", &spec, "--N", "32", "--seed", "11"]);
    assert!(flagged.status.success());

    let env_out = semiflow()
        .args(["probe", &spec, "--N", "32"])
        .env("SEMIFLOW_SEED", "11")
        .output()
        .unwrap();
    assert!(env_out.status.success());
    assert_eq!(stdout(&flagged), stdout(&env_out));
}

#[test]
fn probe_rejects_a_non_numeric_seed_env() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "vertline.spec", VERTICAL_LINE);
    let out = semiflow()
        .args(["probe", &spec, "--N", "32"])
        .env("SEMIFLOW_SEED", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("SEMIFLOW_SEED"));
}

#[test]
fn probe_validates_numeric_flags() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "vertline.spec", VERTICAL_LINE);
    for args in [
        vec!["probe", &spec, "--N", "0"],
        vec!["probe", &spec, "--t-max", "-1"],
        vec!["probe", &spec, "--h", "0"],
        vec!["probe", &spec, "--tol", "-0.5"],
        vec!["probe", &spec, "--kappa", "0.5"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "args: {args:?}");
    }
}

// ── report ──────────────────────────────────────────────────────────────────

#[test]
fn report_merges_documents_into_a_summary_table() {
    let dir = tempfile::tempdir().unwrap();
    let log = write_spec(dir.path(), "logline.spec", LOG_LINE);
    let vert = write_spec(dir.path(), "vertline.spec", VERTICAL_LINE);
    let out_dir = dir.path().join("docs");

    let out = run(&["classify", &log, &vert, "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));

    let merged = run(&[
        "report",
        out_dir.join("log_line.report.json").to_str().unwrap(),
        out_dir.join("vertical_line.report.json").to_str().unwrap(),
        "--format",
        "text",
    ]);
    assert!(merged.status.success(), "stderr: {}", stderr(&merged));
    let table = stdout(&merged);
    assert!(table.contains("log_line"));
    assert!(table.contains("vertical_line"));
    assert!(table.lines().next().unwrap().contains("label"));
}

#[test]
fn report_rejects_files_that_are_not_report_documents() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "logline.spec", LOG_LINE);
    let out = run(&["report", &spec]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not a report document"));
}
