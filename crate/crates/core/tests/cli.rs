use serde_json::{json, Value};
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_logfano"))
}

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn write_doc(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p.to_string_lossy().into_owned()
}

fn surface_doc() -> Value {
    serde_json::from_str(&std::fs::read_to_string(data("blown_up_f1.json")).unwrap()).unwrap()
}

#[test]
fn example_surface_report() {
    let out = run(&[&data("blown_up_f1.json")]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let e = &r["evaluations"][0];
    assert_eq!(e["eta"]["value"]["value"], "-5/6");
    assert_eq!(e["eta"]["verdict"], "NOT_LOG_K_SEMISTABLE");
    assert_eq!(e["df"]["df_value"], "-50/3");
    assert_eq!(e["df"]["v0"], "40/3");
    assert_eq!(e["tau_beta"]["value"], "3/2");
    assert_eq!(r["profile"]["tau"]["value"], "2");
    assert_eq!(r["eta_polynomial"]["eta_minus"], "4/3");
}

#[test]
fn flags_override_document_options() {
    let out = run(&[&data("blown_up_f1.json"), "--beta", "1", "--r", "auto"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["evaluations"][0]["eta"]["value"]["value"], "2/3");
    assert_eq!(r["evaluations"][0]["eta"]["verdict"], "NECESSARY_CONDITION_PASSED_UNDECIDED");
}

#[test]
fn beta_scan_keeps_order() {
    let out = run(&[&data("projective_plane.json"), "--beta-scan", "1/4:1:1/4"]);
    assert_eq!(out.status.code(), Some(0));
    let betas: Vec<String> = report(&out)["evaluations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["beta"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(betas, ["1/4", "1/2", "3/4", "1"]);
}

#[test]
fn text_format_is_readable() {
    let out = run(&[&data("blown_up_f1.json"), "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("eta = -5/6"));
    assert!(text.contains("NOT_LOG_K_SEMISTABLE"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = run(&[&data("blown_up_f1_toric.json")]);
    let b = run(&[&data("blown_up_f1_toric.json")]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn toric_verification_matches_the_integrals() {
    let out = run(&[&data("blown_up_f1_toric.json")]);
    let t = &report(&out)["evaluations"][0]["toric_check"];
    assert_eq!(t["v0_est"], "40/3");
    assert_eq!(t["v1_est"], "15/2");
}

#[test]
fn emitted_bundle_gives_the_same_eta_block() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("bundle.json");
    let out = run(&[&data("blown_up_f1.json"), "--emit-bundle", bundle.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let again = run(&[bundle.to_str().unwrap()]);
    assert_eq!(again.status.code(), Some(0));
    let (a, b) = (report(&out), report(&again));
    assert_eq!(a["evaluations"][0]["eta"], b["evaluations"][0]["eta"]);
    assert_eq!(a["evaluations"][0]["df"], b["evaluations"][0]["df"]);
    assert_eq!(a["eta_polynomial"], b["eta_polynomial"]);
    assert_eq!(b["input_kind"], "bundle");
}

#[test]
fn invalid_json_exits_with_validation_code() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{ not json").unwrap();
    assert_eq!(run(&[p.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["/nonexistent/input.json"]).status.code(), Some(2));
}

#[test]
fn asymmetric_gram_is_reported_with_its_path() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc = surface_doc();
    doc["surface"]["gram"][0][1] = json!("2");
    let p = write_doc(dir.path(), "asym.json", &doc);
    let out = run(&[&p]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("$.surface.gram[0][1]"), "{err}");
}

#[test]
fn out_of_range_beta_is_rejected() {
    let out = run(&[&data("blown_up_f1.json"), "--beta", "3/2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("$.beta"), "{err}");
    assert!(err.contains("outside the range [0, 1]"), "{err}");
}

#[test]
fn zero_boundary_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc = surface_doc();
    doc["surface"]["boundary"] = json!(["0", "0", "0"]);
    let out = run(&[&write_doc(dir.path(), "zero.json", &doc)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("nonzero"));
}

#[test]
fn non_big_beta_is_a_computation_error() {
    let dir = tempfile::tempdir().unwrap();
    // τ = 1 here, so β = 0 leaves -K - D not big
    let doc = json!({
        "surface": {
            "basis": ["D"],
            "gram": [["3"]],
            "canonical": ["-1"],
            "boundary": ["1"],
            "negative_curves": [],
            "test_curves": [["1"]]
        },
        "beta_scan": ["0", "1/2"]
    });
    let out = run(&[&write_doc(dir.path(), "cubic.json", &doc)]);
    let code = out.status.code();
    assert!(code == Some(2) || code == Some(3), "{code:?}");
}
