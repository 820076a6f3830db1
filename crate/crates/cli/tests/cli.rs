use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trophurwitz")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(o: &Output, key: &str) -> String {
    stdout(o)
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")).map(str::to_string))
        .unwrap_or_else(|| panic!("no {key} in output:\n{}", stdout(o)))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn moduli_summary() {
    let o = run(&["moduli", "--n", "4"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "command: moduli\nn: 4\nrays: 3\nambient_dim: 2\ndim: 1\nmaximal_cells: 3\nbalanced: true\n"
    );
}

#[test]
fn six_leaf_cycle_cell_count() {
    let o = run(&["hurwitz", "--k", "2", "--x", "2,2,6,-5,-4,-1", "--p", "0,1"]);
    assert!(o.status.success());
    assert_eq!(field(&o, "maximal_cells"), "3755");
    assert_eq!(field(&o, "ambient_dim"), "9");
}

#[test]
fn restricted_cone_has_six_cells() {
    let o = run(&["hurwitz", "--k", "2", "--x", "2,2,6,-5,-4,-1", "--p", "0,1", "--marked", "--restrict-cone", "1,2;4,5,6;5,6"]);
    assert!(o.status.success());
    assert_eq!(field(&o, "maximal_cells"), "6");
}

#[test]
fn weight_space_of_marked_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("m.json");
    let report = dir.path().join("r.json");
    let o = run(&["hurwitz", "--k", "1", "--x", "1,1,1,1,-4", "--p", "0,0", "--marked", "--verify-minors", "--out", path_str(&file)]);
    assert!(o.status.success());
    assert_eq!(field(&o, "minor_mismatches"), "0");
    let o = run(&["weight-space", path_str(&file), "--out", path_str(&report)]);
    assert!(o.status.success());
    assert_eq!(field(&o, "rank"), "3");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["rank"], 3);
    assert_eq!(v["basis"].as_array().unwrap().len(), 3);
    let o = run(&["connectedness", path_str(&file)]);
    assert_eq!(field(&o, "connected"), "true");
    let o = run(&["balancing", path_str(&file)]);
    assert!(o.status.success());
}

#[test]
fn artifacts_do_not_depend_on_workers() {
    let dir = tempfile::tempdir().unwrap();
    let mut outs = Vec::new();
    for w in ["1", "3", "0"] {
        let f = dir.path().join(format!("h{w}.json"));
        let o = run(&["--workers", w, "hurwitz", "--k", "1", "--x", "2,1,-1,-1,-1", "--p", "0,1/2", "--out", path_str(&f)]);
        assert!(o.status.success());
        outs.push(std::fs::read(&f).unwrap());
    }
    assert!(outs.windows(2).all(|p| p[0] == p[1]));
}

#[test]
fn cut_and_numerical_equivalence() {
    let o = run(&["cut-codim-one", "--x", "1,1,1,1,-4"]);
    assert!(o.status.success());
    assert_eq!(field(&o, "equals_hurwitz_fan"), "true");
    let o = run(&["numequiv", "--k", "1", "--x", "1,1,1,1,-4"]);
    assert!(o.status.success());
    assert_eq!(field(&o, "cones"), "10");
    assert_eq!(field(&o, "equal"), "true");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["hurwitz", "--k", "1", "--x", "1,1,1,-4"]).status.code(), Some(2));
    assert_eq!(run(&["hurwitz", "--k", "1"]).status.code(), Some(2));
    assert_eq!(run(&["weight-space", "/nonexistent/file.json"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("fan.json");
    assert!(run(&["moduli", "--n", "4", "--out", path_str(&f)]).status.success());
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&f).unwrap()).unwrap();
    v["weights"] = serde_json::json!([1, 1, 2]);
    std::fs::write(&f, v.to_string()).unwrap();
    assert_eq!(run(&["balancing", path_str(&f)]).status.code(), Some(1));
}

#[test]
fn minor_limit_is_enforced() {
    let o = Command::new(env!("CARGO_BIN_EXE_trophurwitz"))
        .args(["hurwitz", "--k", "1", "--x", "1,1,1,1,-4", "--p", "0,1", "--verify-minors"])
        .env("TROP_MINOR_LIMIT", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
