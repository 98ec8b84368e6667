use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn rgk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rgk")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8")
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rgk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join(name);
    std::fs::write(&path, text).expect("write");
    path
}

#[test]
fn validate_accepts_a_wheel() {
    let o = rgk(&["validate", &fixture("wheel.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("chordal"));
}

#[test]
fn validate_rejects_loops() {
    let o = rgk(&["validate", &fixture("loop.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("graph clause") && stderr(&o).contains("no loops"), "{}", stderr(&o));
}

#[test]
fn validate_rejects_a_degree_five_chordal_vertex() {
    let o = rgk(&["validate", &fixture("degree5.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("chordal clause"), "{}", stderr(&o));
}

#[test]
fn malformed_json_reports_its_position() {
    let path = scratch("broken.json", "{\n  \"format\": \"rgk-graph/1\",\n  oops\n}\n");
    let o = rgk(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn missing_files_are_io_errors() {
    let o = rgk(&["validate", "/nonexistent/graph.json"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn circle_invariants() {
    let o = rgk(&["invariants", &fixture("circle.json"), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).expect("json");
    assert_eq!(v["boundary_components"], 2);
    assert_eq!(v["genus"], 0);
}

#[test]
fn torus_invariants() {
    let o = rgk(&["invariants", &fixture("torus.json"), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).expect("json");
    assert_eq!(v["shape"], "CYCLE");
    assert_eq!(v["indices"]["values"], serde_json::json!([1, 1]));
    let zero = v["zero_section"].as_array().unwrap();
    assert_eq!(zero.len(), 2);
    assert!(zero.iter().all(|z| z["circle"] == true && z["genus"] == 0));
    let table = stdout(&rgk(&["invariants", &fixture("torus.json")]));
    assert!(table.contains("CYCLE") && table.contains("(1,1)"));
}

#[test]
fn dot_export_matches_the_golden_file() {
    let o = rgk(&["export-dot", &fixture("curtain_rod.json")]);
    let golden = std::fs::read_to_string(fixture("curtain_rod.dot")).unwrap();
    assert_eq!(stdout(&o), golden);
    assert_eq!(stdout(&o).matches("style=bold").count(), 4);
}

#[test]
fn dot_export_of_a_regraded_document_is_unchanged() {
    let first = stdout(&rgk(&["export-dot", &fixture("wheel.json")]));
    let graded = stdout(&rgk(&["grade", "--graph", &fixture("wheel.json")]));
    let path = scratch("graded.json", &graded);
    assert_eq!(rgk(&["validate", path.to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(stdout(&rgk(&["export-dot", path.to_str().unwrap()])), first);
}

#[test]
fn circle_dot_is_a_two_cycle() {
    let dot = stdout(&rgk(&["export-dot", &fixture("circle.json")]));
    assert_eq!(dot.matches(" -- ").count(), 2);
    assert_eq!(dot.matches("[label=\"{").count(), 2);
}

#[test]
fn cross_quiver_and_its_representations() {
    let o = rgk(&["quiver", &fixture("cross.json")]);
    assert!(stdout(&o).contains("• ← • ← • → • → •"));
    let constant = scratch("constant.json", &stdout(&rgk(&["quiver", &fixture("cross.json"), "--rep", "constant"])));
    let projective =
        scratch("projective.json", &stdout(&rgk(&["quiver", &fixture("cross.json"), "--rep", "projective:2"])));
    let o = rgk(&["hom", projective.to_str().unwrap(), constant.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).expect("json");
    assert_eq!((v["hom"].clone(), v["ext"].clone()), (1.into(), 0.into()));
    let o = rgk(&["reflect", constant.to_str().unwrap(), "--vertex", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = rgk(&["reflect", constant.to_str().unwrap(), "--vertex", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).expect("json");
    assert_eq!(v["dims"], serde_json::json!([0, 1, 1, 1, 1]));
}

#[test]
fn torus_is_the_nodal_elliptic_curve() {
    let o = rgk(&["hms-check", "--graph", &fixture("torus.json"), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).expect("json");
    assert_eq!(v["cpm"], v["perf"]);
    let o = rgk(&["cpm-hom", &fixture("torus.json")]);
    assert!(stdout(&o).contains("h^0=1 h^1=1") && stdout(&o).contains("euler=0"));
}

#[test]
fn mirror_check_kronecker() {
    let o = rgk(&["mirror-check", "--indices", "1,1", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).expect("json");
    assert_eq!(v["wheel"]["balloon_hom"], serde_json::json!([[1, 2], [0, 1]]));
    assert_eq!(rgk(&["mirror-check", "--indices", "3"]).status.code(), Some(1));
}

#[test]
fn sieve_check_on_a_circle() {
    let o = rgk(&["sieve-check", "--graph", &fixture("circle.json"), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).expect("json");
    assert_eq!(v["stars_cover"], true);
}

#[test]
fn verify_all_is_deterministic() {
    let args = ["verify-all", "--only", "1,3,5", "--seed", "11", "--json"];
    let (a, b) = (rgk(&args), rgk(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).expect("json");
    assert_eq!(v["criteria"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_all_exits_two_on_a_failing_suite() {
    let o = rgk(&["verify-all", "--only", "8"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("[FAIL]"));
}

#[test]
fn truncation_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_rgk"))
        .args(["verify-all", "--only", "5", "--json"])
        .env("RGK_TRUNCATION", "7")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).expect("json");
    assert_eq!(v["options"]["truncation"], 7);
    let o = Command::new(env!("CARGO_BIN_EXE_rgk")).args(["verify-all", "--only", "5"]).env("RGK_TRUNCATION", "x").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}
