use serde_json::Value;
use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_scatterlab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_with_input(args: &[&str], input: &[u8]) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

const REFERENCE_1: &str = "\
[[1, 0, 3],
 [3, 1, 5],
 [2, 1, 15],
 [3, 2, 125],
 [1, 1, 15],
 [2, 2, 60],
 [2, 3, 270],
 [1, 2, 30],
 [1, 3, 30],
 [1, 4, 15],
 [0, 1, 5]]
";

const REFERENCE_2: &str = "\
[[1, 0, 2],
 [4, 1, 1],
 [3, 1, 2],
 [2, 1, 2],
 [4, 2, 19],
 [3, 2, 16],
 [1, 1, 2],
 [2, 2, 13/2],
 [3, 3, 33],
 [2, 3, 10],
 [1, 2, 1],
 [2, 4, 9/2],
 [1, 3, 1],
 [0, 1, 1]]
";

#[test]
fn order_reproduces_reference_runs() {
    let o = run(&["order", "-L", "5", "--product", "[[0,1,5],[1,0,3]]", "--format", "list"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), REFERENCE_1);
    let o = run(&["order", "-L", "6", "--product", "[[0,1,1],[1,2,1],[2,1,1],[2,2,1/2],[1,0,2]]", "--format", "list"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), REFERENCE_2);
}

#[test]
fn order_json_lists_the_same_rows() {
    let o = run(&["order", "-L", "6", "--product", "[[0,1,1],[1,2,1],[2,1,1],[2,2,1/2],[1,0,2]]"]);
    assert!(o.status.success());
    let rows = json(&o);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 14);
    assert_eq!(rows[7], serde_json::json!([2, 2, [13, 2]]));
    assert_eq!(rows[13], serde_json::json!([0, 1, [1, 1]]));
}

#[test]
fn build_then_verify_round_trip() {
    let o = run(&["build", "--type", "B2", "-L", "4"]);
    assert!(o.status.success());
    let d = json(&o);
    assert_eq!(d["format"], 1);
    assert_eq!(d["cutoff"], 4);
    let v = run_with_input(&["verify", "--diagram", "-"], &o.stdout);
    assert!(v.status.success(), "{}", String::from_utf8_lossy(&v.stderr));
    let report = json(&v);
    assert_eq!(report["consistent"], true);
    assert_eq!(report["admissible"], true);
}

#[test]
fn corrupted_diagram_fails_verification() {
    let o = run(&["build", "--type", "A2", "-L", "3"]);
    let mut d = json(&o);
    let walls = d["walls"].as_array_mut().unwrap();
    let i = walls.iter().position(|w| w["normal"] == serde_json::json!([1, 1])).unwrap();
    walls.remove(i);
    let v = run_with_input(&["verify", "--diagram", "-"], d.to_string().as_bytes());
    assert_eq!(v.status.code(), Some(1));
    let report = json(&v);
    assert_eq!(report["consistent"], false);
    assert!(!report["failures"].as_array().unwrap().is_empty());
}

#[test]
fn custom_exchange_matrix_matches_preset() {
    let a = run(&["build", "--type", "A3", "-L", "3"]);
    let b = run(&["build", "--b", "[[0,-1,0],[1,0,-1],[0,1,0]]", "--delta", "1,1,1", "-L", "3"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(json(&a)["walls"], json(&b)["walls"]);
}

#[test]
fn mutate_with_verification() {
    let o = run(&["build", "--type", "A2", "-L", "6"]);
    let m = run_with_input(&["mutate", "--diagram", "-", "-k", "1", "--verify"], &o.stdout);
    assert!(m.status.success(), "{}", String::from_utf8_lossy(&m.stderr));
    assert!(String::from_utf8_lossy(&m.stderr).contains("is equivalent to"));
    let bad = run_with_input(&["mutate", "--diagram", "-", "-k", "3"], &o.stdout);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn theta_output_and_exit_codes() {
    let o = run(&["build", "--type", "A2", "-L", "4"]);
    let t =
        run_with_input(&["theta", "--diagram", "-", "--m0", "-1,0", "--Q", "5/3,2/7", "-L", "4", "--lines"], &o.stdout);
    assert!(t.status.success(), "{}", String::from_utf8_lossy(&t.stderr));
    let v = json(&t);
    assert_eq!(v["positive"], true);
    assert_eq!(v["terms"].as_array().unwrap().len(), 2);
    assert_eq!(v["broken_lines"].as_array().unwrap().len(), 2);
    // An endpoint on a wall is rejected with a nearby suggestion.
    let t = run_with_input(&["theta", "--diagram", "-", "--m0", "-1,0", "--Q", "0,1", "-L", "4"], &o.stdout);
    assert_eq!(t.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&t.stderr).contains("try"));
    // A cutoff above the diagram's is a usage error.
    let t = run_with_input(&["theta", "--diagram", "-", "--m0", "-1,0", "--Q", "5/3,2/7", "-L", "9"], &o.stdout);
    assert_eq!(t.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["order", "-L", "3", "--product", "[[0,1"]).status.code(), Some(2));
    assert_eq!(run(&["build", "--type", "Z9", "-L", "3"]).status.code(), Some(2));
    assert_eq!(run(&["build", "--type", "A2", "-L", "0"]).status.code(), Some(2));
    assert_eq!(run(&["badlands", "--delta", "1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verification_suites_pass() {
    for suite in ["pentagon", "bracket", "oracle", "conjugation"] {
        let o = run(&["verify", suite, "--count", "20"]);
        assert!(o.status.success(), "{suite}: {}", stdout(&o));
        assert!(stdout(&o).contains("0 failures"));
    }
}

#[test]
fn badlands_normals_are_present() {
    let o = run(&["badlands", "--delta", "1,5"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["missing"], serde_json::json!([]));
    assert_eq!(v["region_normals"], serde_json::json!([[1, 2], [1, 3], [2, 3], [2, 4], [2, 5]]));
}

#[test]
fn gfan_of_a2_has_five_cones() {
    let o = run(&["gfan", "--type", "A2", "--depth", "5"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["cones"].as_array().unwrap().len(), 5);
}

#[test]
fn render_is_deterministic_svg() {
    let a = run(&["render", "--type", "A3", "-L", "3"]);
    let b = run(&["render", "--type", "A3", "-L", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let svg = stdout(&a);
    assert!(svg.starts_with("<?xml") && svg.contains("version=\"1.1\"") && svg.trim_end().ends_with("</svg>"));
    let rank2 = run(&["render", "--type", "A2", "-L", "3"]);
    assert_eq!(rank2.status.code(), Some(2));
}

#[test]
fn presets_are_listed() {
    let o = run(&["presets"]);
    assert!(o.status.success());
    for name in ["A2", "B2", "G2", "A1(1)", "A3", "B3", "C3"] {
        assert!(stdout(&o).lines().any(|l| l.starts_with(name)), "{name}");
    }
}
