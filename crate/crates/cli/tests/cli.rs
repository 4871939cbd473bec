use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use webdimer::plabic::make_rectangle_graph;

fn webdimer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_webdimer")).args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn count_trees_r4() {
    let o = webdimer(&["count", "trees", "--r", "4"]);
    assert!(o.status.success());
    let v = stdout_json(&o);
    assert_eq!(v["count"], 52);
    assert_eq!(v["orbit_sizes"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).sum::<u64>(), 52);
}

#[test]
fn lower_bound_table() {
    let o = webdimer(&["count", "lower-bound", "-n", "9", "--format", "table"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().last().unwrap().ends_with("261"));
}

#[test]
fn bad_flag_is_usage_error() {
    let o = webdimer(&["count", "trees", "--nope"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("Usage"));
    let last: Value = serde_json::from_str(err.lines().last().unwrap()).unwrap();
    assert_eq!(last["error"]["kind"], "usage");
}

#[test]
fn missing_file_reports_json_error() {
    let o = webdimer(&["measure", "--network", "/nonexistent/n.json"]);
    assert_eq!(o.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "io");
}

#[test]
fn verify_duality_3_3() {
    let o = webdimer(&["verify", "--suite", "duality-3-3"]);
    assert!(o.status.success());
    let v = stdout_json(&o);
    assert_eq!(v["passed"], true);
    assert_eq!(v["criteria"][0]["details"]["shape"], serde_json::json!([42, 42]));
}

#[test]
fn basis_dirs_and_duality_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("sl2");
    let b = dir.path().join("sl3");
    assert!(webdimer(&["basis", "sl2", "-n", "6", "--out", p(&a)]).status.success());
    let o = webdimer(&["basis", "sl3", "-n", "6", "--out", p(&b)]);
    assert_eq!(stdout_json(&o)["count"], 5);
    assert!(b.join("112233.json").exists());
    let o = webdimer(&["duality", "--basisA", p(&a), "--basisB", p(&b), "--report"]);
    assert!(o.status.success());
    assert_eq!(stdout_json(&o)["dual"], true);

    std::fs::copy(b.join("112233.json"), b.join("112323.json")).unwrap();
    let o = webdimer(&["duality", "--basisA", p(&a), "--basisB", p(&b), "--report"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout_json(&o)["dual"], false);
}

#[test]
fn measure_and_twist_commands() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    std::fs::write(&g, serde_json::to_string(&make_rectangle_graph(2, 4).unwrap().to_json()).unwrap()).unwrap();
    let v = stdout_json(&webdimer(&["measure", "--network", p(&g)]));
    assert_eq!(v["plucker"].as_object().unwrap().len(), 6);
    assert_eq!(v["plucker"]["1,2"], "1");

    let delta_13 = v["plucker"]["1,3"].as_str().unwrap().parse::<u64>().unwrap();
    let v = stdout_json(&webdimer(&["dimers", "enum", "--graph", p(&g), "-r", "1", "--lambda", "1,0,1,0"]));
    assert_eq!(v["count"].as_u64().unwrap(), delta_13);

    let m = dir.path().join("m.json");
    std::fs::write(&m, "[[1,0,-1,2],[0,1,3,1]]").unwrap();
    let v = stdout_json(&webdimer(&["twist-matrix", "--matrix", p(&m)]));
    assert_eq!(v["twist"].as_array().unwrap().len(), 2);

    let f = dir.path().join("f.json");
    std::fs::write(&f, r#"[{"coeff":"1","mono":{"1,3":1}}]"#).unwrap();
    let o = webdimer(&["twist-expand", "--poly", p(&f), "--rectangle", "2,4"]);
    assert!(o.status.success());
    assert!(!stdout_json(&o).as_array().unwrap().is_empty());
}

#[test]
fn pair_with_monomials() {
    let dir = tempfile::tempdir().unwrap();
    let b = dir.path().join("b");
    webdimer(&["basis", "sl3", "-n", "6", "--out", p(&b)]);
    let o = webdimer(&["pair", "--web", p(&b.join("123123.json")), "--monomials", "1,2;3,4;5,6"]);
    assert!(o.status.success());
    assert!(stdout_json(&o)["pairing"].is_string());
    let o = webdimer(&["pair", "--web", p(&b.join("123123.json")), "--monomials", "1,2,3;4,5,6"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn output_is_reproducible() {
    let a = webdimer(&["verify", "--suite", "twist", "--seed", "7"]);
    let b = webdimer(&["verify", "--suite", "twist", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout_json(&a)["criteria"][0]["seed"], 10);
    let c = webdimer(&["count", "sl4-trees", "--sequential"]);
    let d = webdimer(&["count", "sl4-trees"]);
    assert_eq!(c.stdout, d.stdout);
    assert_eq!(stdout_json(&c)["distinct_invariants"], 123);
}
