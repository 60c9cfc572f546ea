use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypersym")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn verify_identities_reports_all_cases() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ids.json");
    let o = run(&["verify-identities", "--output", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rep = json(&out);
    assert_eq!(rep["passed"], true);
    let cases = rep["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 4);
    assert!(cases.iter().all(|c| c["components_checked"] == 27));
    assert!(rep["version"].is_string());
}

#[test]
fn verify_single_case_and_show_equations() {
    let o = run(&["verify-identities", "--case", "z3", "--show-equations"]);
    assert_eq!(code(&o), 0);
    let rep: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rep["cases"].as_array().unwrap().len(), 1);
    assert_eq!(rep["cases"][0]["case"], "Z3");
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.lines().filter(|l| l.ends_with("= 0")).count() >= 17, "{err}");
}

#[test]
fn unknown_case_is_a_usage_error() {
    assert_eq!(code(&run(&["verify-identities", "--case", "z4"])), 64);
}

#[test]
fn build_writes_csv_mesh() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = dir.path().join("mesh.csv");
    let report = dir.path().join("cond.json");
    let o = run(&[
        "build",
        "--family",
        "c1-proper",
        "--base",
        "two-sheeted",
        "--curve",
        "cosh,sinh",
        "--t",
        "0.5:2:5",
        "--vw",
        "-1:1:3",
        "--output",
        mesh.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&mesh).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,v,w,x0,x1,x2,x3"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 45);
    let first: Vec<f64> = rows[0].split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(first.len(), 7);
    assert_eq!(&first[..3], &[0.5, -1.0, -1.0]);
    let cond = json(&report);
    assert_eq!(cond["condition_failures"], 0);
    assert_eq!(cond["conditions"].as_array().unwrap().len(), 5);
}

#[test]
fn build_json_mesh_for_constant_family() {
    let o = run(&[
        "build",
        "--family",
        "c3a",
        "--base",
        "elliptic-paraboloid",
        "--c",
        "1",
        "--t",
        "0.1:3:4",
        "--vw",
        "-1:1:2",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["family"], "c3a");
    assert_eq!(doc["points"].as_array().unwrap().len(), 16);
    assert!(doc["params"].is_object() && doc["grid"].is_object());
}

#[test]
fn inadmissible_base_is_rejected() {
    let o = run(&["build", "--family", "c2", "--base", "sphere", "--curve", "t,exp"]);
    assert_eq!(code(&o), 64);
    assert!(String::from_utf8_lossy(&o.stderr).contains("elliptic-paraboloid"));
}

#[test]
fn violated_condition_still_writes_mesh() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = dir.path().join("mesh.csv");
    let o = run(&[
        "build",
        "--family",
        "c1-improper",
        "--base",
        "two-sheeted",
        "--curve",
        "t,exp",
        "--t",
        "0.5:1:3",
        "--vw",
        "-1:1:2",
        "--output",
        mesh.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 2);
    assert_eq!(std::fs::read_to_string(&mesh).unwrap().lines().count(), 13);
}

#[test]
fn certify_passes_for_hyperbola_profile() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cert.json");
    let o = run(&[
        "certify",
        "--family",
        "c1-proper",
        "--base",
        "two-sheeted",
        "--curve",
        "cosh,sinh",
        "--t",
        "0.5:2:6",
        "--vw",
        "-1:1:4",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rep = json(&out);
    assert_eq!(rep["summary"]["verdict"], "Pass");
    assert!(rep["summary"]["max_s_residual"].as_f64().unwrap() < 1e-10);
    assert!(rep["tolerances"].is_object() && rep["config"].is_object());
    assert_eq!(rep["points"].as_array().unwrap().len(), 96);
    assert!(rep.get("runtime_seconds").is_none());
}

#[test]
fn negative_control_needs_force_and_then_fails_on_signature() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("neg.json");
    let base = [
        "certify",
        "--instance",
        "negative-control",
        "--t",
        "0.3:1.2:3",
        "--vw",
        "-0.5:0.5:3",
        "--output",
        out.to_str().unwrap(),
    ];
    let o = run(&base);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&out)["verdict"], "fail");

    let mut forced = base.to_vec();
    forced.push("--force");
    let o = run(&forced);
    assert_eq!(code(&o), 2);
    let rep = json(&out);
    let points = rep["points"].as_array().unwrap();
    assert!(points.iter().all(|p| p["signature"] == "Definite"));
}

#[test]
fn certify_measures_lightcone_family() {
    let o =
        run(&["certify", "--instance", "c1t8-proper/one-sheeted", "--measure", "--t", "0.5:2:4", "--vw", "-0.8:0.8:3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rep: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for p in rep["points"].as_array().unwrap() {
        assert_eq!(p["measured"]["class"], "SO11");
    }
}

#[test]
fn classify_tables() {
    for (args, class) in [
        (vec!["--instance", "c1-proper/titeica"], "z3"),
        (vec!["--family", "c3a", "--base", "elliptic-paraboloid", "--vw", "-1:1:3"], "so2"),
        (vec!["--family", "c3t8a", "--base", "hyperbolic-paraboloid", "--vw", "-1:1:3"], "so11"),
    ] {
        let mut a = vec!["classify", "--t", "0.5:2:3"];
        a.extend(args);
        let o = run(&a);
        assert_eq!(code(&o), 0, "{a:?}: {}", String::from_utf8_lossy(&o.stderr));
        let text = String::from_utf8(o.stdout).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,v,w,frame,a4,a6,b4,class,nu,case"));
        let rows: Vec<&str> = lines.collect();
        assert!(!rows.is_empty());
        assert!(rows.iter().all(|r| r.split(',').nth(7) == Some(class)), "{a:?}: {text}");
    }
}

#[test]
fn synthesized_curve_from_the_command_line() {
    let o = run(&[
        "certify",
        "--family",
        "c1-improper",
        "--base",
        "two-sheeted",
        "--synthesize",
        "--g1",
        "t",
        "--g2-0",
        "1",
        "--g2p-0",
        "0.5",
        "--t0",
        "0.4",
        "--t",
        "0.5:2:4",
        "--vw",
        "-1:1:3",
        "--measure",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rep: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(rep["conditions"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(code(&run(&["frobnicate"])), 64);
    assert_eq!(code(&run(&["build", "--family", "c1-proper"])), 64);
    assert_eq!(code(&run(&["build", "--family", "c1-proper", "--base", "two-sheeted", "--t", "1:2"])), 64);
    assert_eq!(code(&run(&["build", "--family", "c3a", "--base", "elliptic-paraboloid", "--c", "-1"])), 64);
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
    let help = run(&["build", "--help"]);
    assert!(String::from_utf8_lossy(&help.stdout).contains("start:end:count"));
}

#[test]
fn output_is_deterministic() {
    let args = ["certify", "--instance", "c2/elliptic-paraboloid", "--measure", "--t", "0.5:2:3", "--vw", "-1:1:3"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
