//! End-to-end runs of the `monodromy` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monodromy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("monodromy-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn d_with_r_minus_one_is_the_f_instance() {
    let o = run(&["verify", "--family", "d", "--q", "0", "--r", "-1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("instance: f(q=0)"), "{text}");
    assert!(text.contains("result:   PASS"), "{text}");
}

#[test]
fn clean_script_replays() {
    let o = run(&[
        "verify",
        "--family",
        "g",
        "--script",
        &fixture("g000.script.json"),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn tampered_script_names_the_failing_step() {
    let json = scratch("tampered.json");
    let o = run(&[
        "verify",
        "--family",
        "g",
        "--script",
        &fixture("g000-tampered.script.json"),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("FAILED at step 11 [check]"), "{text}");
    assert!(text.contains("β₁ carried past α_{r+4}"), "{text}");
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(doc["failed_step"], 11);
    assert_eq!(doc["pass"], false);
    assert_eq!(doc["steps"][11]["pass"], false);
    assert_eq!(doc["final_checks"]["script_replays"], false);
}

#[test]
fn script_for_another_instance_is_an_input_error() {
    let o = run(&[
        "verify",
        "--family",
        "g",
        "--p",
        "1",
        "--script",
        &fixture("g000.script.json"),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn certificates_are_byte_deterministic() {
    let (a, b) = (scratch("cert-a.json"), scratch("cert-b.json"));
    for path in [&a, &b] {
        let o = run(&[
            "verify",
            "--family",
            "h",
            "--q",
            "1",
            "--json",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let (x, y) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(x, y);
    let doc: serde_json::Value = serde_json::from_slice(&x).unwrap();
    assert_eq!(doc["instance"], "h(q=1)");
    assert_eq!(doc["wprime_len"], doc["fiber"]["b1"]);
    let steps = doc["steps"].as_array().unwrap();
    assert_eq!(steps[0]["pre"], doc["w_hash"]);
    assert_eq!(steps.last().unwrap()["post"], doc["wprime_hash"]);
    for pair in steps.windows(2) {
        assert_eq!(pair[0]["post"], pair[1]["pre"]);
    }
    for key in [
        "faithful_equal",
        "h1_equal",
        "qhb",
        "lattice_match",
        "det_square",
        "adjunction",
    ] {
        assert_eq!(doc["final_checks"][key], true, "{key}");
    }
    assert!(doc["versions"]["core"].is_string());
}

#[test]
fn grid_summary_table() {
    let o = run(&["verify", "--grid", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("112/112 instances pass"), "{text}");
    for label in [
        "d(q=3,r=3)",
        "e(p=3,q=3)",
        "f(q=0)",
        "g(p=3,q=3,r=3)",
        "h(q=2)",
        "i(q=1)",
        "j(q=0)",
    ] {
        assert!(text.contains(label), "{label}");
    }
}

#[test]
fn lantern_invariants() {
    let o = run(&[
        "invariants",
        "--word",
        "L[2,1] L[3,1] L[3,2]",
        "--planar",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("chi:         1"), "{text}");
    assert!(text.contains("H1:          Z/2"), "{text}");

    let o = run(&["invariants", "--word", "a1 a2 a3 out", "--planar", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("form:        [[-4]]"));
}

#[test]
fn gay_mark_graph_invariants() {
    let g = scratch("a2.json");
    fs::write(&g, r#"{"weights": [-2, -2], "edges": [[0, 1]]}"#).unwrap();
    let json = scratch("a2-inv.json");
    let o = run(&[
        "invariants",
        "--graph",
        g.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("vertex form: [[-2,1],[1,-2]]"));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(doc["lattice_match"], true);
}

#[test]
fn build_prints_the_global_monodromy() {
    let o = run(&["build", "--family", "j", "--q", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("instance: j(q=1)"), "{text}");
    assert!(text.contains("W:"), "{text}");
}

#[test]
fn input_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["verify", "--family", "x"],
        &["verify", "--family", "d", "--r", "-2"],
        &["verify"],
        &["verify", "--grid", "2", "--family", "d"],
        &["invariants", "--word", "a9", "--planar", "3"],
        &["invariants", "--word", "a1"],
        &["invariants", "--graph", "/nonexistent/graph.json"],
        &["build", "--family", "d", "--graph", "x.json"],
        &["frobnicate"],
    ];
    for args in cases {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}
