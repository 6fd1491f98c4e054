use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn wqm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wqm")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = wqm(args);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\nstderr: {}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code().unwrap(), v)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wqm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn brooks_defect_on_b3() {
    let (code, v) = json(&["defect", "--brooks", "ab", "--radius", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "PASS");
    assert_eq!(v["result"]["defect"]["defect"], 1.0);
    assert_eq!(v["result"]["defect"]["triples_checked"], 53 * 53 * 53);
    assert_eq!(v["result"]["bound"]["value"], 6.0);
    assert_eq!(v["config"]["seed"], 0x5EED);
}

#[test]
fn homomorphisms_have_zero_defect() {
    let (code, v) = json(&["defect", "--brooks", "a", "--radius", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["defect"]["defect"], 0.0);
    let (code, v) = json(&["defect", "--delta", "letters", "--lambda", r#"{"a":1}"#, "--radius", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["defect"]["defect"], 0.0);
}

#[test]
fn brooks_word_accepted_as_json_string() {
    let (code, v) = json(&["defect", "--brooks", r#""aab""#, "--radius", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["config"]["instance"], "brooks:aab");
}

#[test]
fn cup_certificates_pass() {
    let (code, v) = json(&["cup", "--brooks", "ab", "--zeta", "brooks:aab", "--samples", "2000"]);
    assert_eq!(code, 0);
    let certs = v["result"]["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 2);
    for c in certs {
        assert_eq!(c["status"], "PASS");
        assert_eq!(c["coboundary_residual"]["max_abs"], 0.0);
        assert_eq!(c["seed"], 0x5EED);
    }
    let (code, v) = json(&["cup", "--brooks", "ab", "--zeta", "zero:2", "--side", "left"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["certificates"][0]["primitive_norm"]["max_abs"], 0.0);
}

#[test]
fn massey_certificate_passes() {
    let (code, v) = json(&["massey", "--brooks", "ab", "--zeta1", "brooks:aab", "--zeta2", "brooks:bba", "--samples", "2000"]);
    assert_eq!(code, 0);
    let c = &v["result"]["certificate"];
    assert_eq!(c["status"], "PASS");
    assert_eq!(c["kappa_identity_residual"]["max_abs"], 0.0);
    assert_eq!(c["coboundary_residual"]["max_abs"], 0.0);
}

#[test]
fn staircase_lengths() {
    for (complex, sigma) in [("grid:3x3", 1), ("staircase:3", 3), ("tree:7", 1)] {
        let (code, v) = json(&["median", "--complex", complex, "--staircase"]);
        assert_eq!(code, 0, "{complex}");
        assert_eq!(v["result"]["staircase"]["length"], sigma, "{complex}");
    }
}

#[test]
fn tree_segment_agrees_with_brooks() {
    let (code, v) = json(&["median", "--complex", "tree-F2", "--segment", "ab", "--agree-brooks", "--radius", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["ball_size"], 485);
    assert_eq!(v["result"]["values"]["abab"], 2);
    assert_eq!(v["result"]["values"]["e"], 0);
}

#[test]
fn median_segments_agree_on_grid() {
    let (code, v) = json(&["median", "--complex", "grid:3x3", "--ell", "2", "--segment", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["segments_checked"], 4);
}

#[test]
fn verify_commands_pass_on_valid_instances() {
    for args in [
        vec!["verify-weight", "--brooks", "aab"],
        vec!["verify-coherence", "--brooks", "ab", "--radius", "2"],
        vec!["verify-coherence", "--complex", "grid:3x3"],
        vec!["verify-delta", "--delta", "letters", "--radius", "3"],
    ] {
        let (code, v) = json(&args);
        assert_eq!(code, 0, "{args:?}");
        assert_eq!(v["status"], "PASS", "{args:?}");
    }
}

#[test]
fn broken_decomposition_fails_with_witness() {
    let (code, v) = json(&["verify-delta", "--delta", "broken", "--radius", "3"]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "FAIL");
    let entries = v["result"]["report"]["entries"].as_array().unwrap();
    let sub = entries.iter().find(|e| e["condition"] == "sub-product").unwrap();
    assert_eq!(sub["status"], "FAIL");
    assert!(sub["counterexample"].is_string());
}

#[test]
fn non_median_graph_is_rejected() {
    let path = scratch("pentagon.json");
    let spec = r#"{"vertices": ["a","b","c","d","e"],
        "edges": [["a","b"],["b","c"],["c","d"],["d","e"],["e","a"]]}"#;
    std::fs::write(&path, spec).unwrap();
    let out = wqm(&["median", "--graph", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a median graph"));
}

#[test]
fn json_graph_with_action() {
    let path = scratch("square.json");
    let spec = r#"{"vertices": ["00","01","11","10"],
        "edges": [["00","01"],["01","11"],["11","10"],["10","00"]],
        "generators": [{"name": "flip", "permutation": {"00":"10","10":"00","01":"11","11":"01"}}]}"#;
    std::fs::write(&path, spec).unwrap();
    let (code, v) = json(&["median", "--graph", path.to_str().unwrap(), "--staircase"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["hyperplanes"], 2);
    assert_eq!(v["result"]["staircase"]["length"], 0);
}

#[test]
fn usage_errors_exit_nonzero() {
    assert_eq!(wqm(&["defect", "--brooks", "ab", "--complex", "grid:3x3"]).status.code(), Some(2));
    assert_eq!(wqm(&["defect", "--brooks", "aB1"]).status.code(), Some(2));
    assert_eq!(wqm(&["defect", "--brooks", "ab", "--radius", "9"]).status.code(), Some(2));
    assert_eq!(wqm(&["cup", "--brooks", "ab", "--zeta", "nope:1"]).status.code(), Some(2));
    assert_eq!(wqm(&["defect", "--complex", "grid:3x3"]).status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical_and_out_matches_stdout() {
    let path = scratch("cup.json");
    let args = ["cup", "--brooks", "ab", "--zeta", "brooks:aab", "--samples", "500", "--seed", "7"];
    let a = wqm(&args);
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let b = wqm(&with_out);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
    let (_, v) = json(&args);
    assert_eq!(v["config"]["seed"], 7);
}

#[test]
fn table_view() {
    let out = wqm(&["--table", "defect", "--brooks", "ab"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("defect [brooks:ab] seed=24301"));
    assert!(text.trim_end().ends_with("overall: PASS"));
}
