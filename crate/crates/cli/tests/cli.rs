use std::path::PathBuf;
use std::process::{Command, Output};

use flaplab_core::arborescence::{validate, ArborescenceFile};
use flaplab_core::corpus::corpus_graph;
use serde_json::Value;

fn flaplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flaplab")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn drawn_trees() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/corpus/fig2.trees.json")
        .to_string_lossy()
        .into_owned()
}

#[test]
fn bipartitioned_circular_verifies_on_fig2() {
    let out = flaplab(&[
        "verify", "--corpus", "fig2", "--scheme", "circular:bipartitioned", "--mode", "dynamic", "--k", "3", "-s", "all", "-t", "t",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).starts_with("Resilient"));
}

#[test]
fn three_bit_headers_fail_dynamic_on_fig2() {
    let out = flaplab(&["verify", "--corpus", "fig2", "--scheme", "hdr-3-bits", "--mode", "dynamic", "--k", "3"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("Loop"));
}

#[test]
fn repro_fig1_prints_the_loop() {
    let out = flaplab(&["repro", "fig1-clockwise-dynamic"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("c a d b c"));
}

#[test]
fn decompose_output_validates() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trees.json");
    let dot = dir.path().join("trees.dot");
    let out = flaplab(&[
        "decompose",
        "--corpus",
        "fig2",
        "--bipartition",
        "--out",
        path.to_str().unwrap(),
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let g = corpus_graph("fig2").unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let ts = ArborescenceFile::parse(&text).unwrap().to_set(&g).unwrap();
    assert_eq!(ts.k(), 4);
    assert!(validate(&g, &ts, true).pass);
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("digraph"));

    let out = flaplab(&["validate", "--corpus", "fig2", "--trees", path.to_str().unwrap(), "--bipartition"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn json_reports_are_reproducible() {
    let args = ["verify", "--corpus", "fig1", "--scheme", "circular", "--k", "1", "--json", "--no-timestamp"];
    let (a, b) = (flaplab(&args), flaplab(&args));
    assert_eq!(code(&a), code(&b));
    assert_eq!(a.stdout, b.stdout);
    let report: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(report.get("generatedAt").is_none());

    let stamped = flaplab(&args[..args.len() - 1]);
    let report: Value = serde_json::from_slice(&stamped.stdout).unwrap();
    assert!(report["generatedAt"].is_u64());
}

#[test]
fn bad_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"nodes\": [\"a\"], \"edges\": [[\"a\", \"zz\"]]}").unwrap();
    let cases: [Vec<&str>; 4] = [
        vec!["verify", "--graph", path.to_str().unwrap(), "--scheme", "circular", "--k", "1", "-t", "a"],
        vec!["verify", "--corpus", "fig2", "--scheme", "bogus", "--k", "1"],
        vec!["verify", "--corpus", "fig2", "--scheme", "circular"],
        vec!["verify", "--corpus", "no-such-graph", "--scheme", "circular", "--k", "1"],
    ];
    for args in cases {
        assert_eq!(code(&flaplab(&args)), 2, "{args:?}");
    }
}

#[test]
fn metagraph_reports_shared_failures() {
    let trees = drawn_trees();
    let out = flaplab(&["metagraph", "--corpus", "fig2", "--trees", &trees, "-f", "a-b", "--json", "--no-timestamp"]);
    assert_eq!(code(&out), 0);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["arborescences"], 4);
    assert_eq!(report["treeComponents"], 3);
    assert_eq!(report["edges"].as_array().unwrap().len(), 1);
    assert!(!report["good"].as_array().unwrap().is_empty());
}

#[test]
fn flapping_schedule_loops_on_drawn_trees() {
    let trees = drawn_trees();
    let out = flaplab(&[
        "simulate", "--corpus", "fig2", "--scheme", "hdr-3-bits", "--trees", &trees, "-s", "x", "-f", "a-b,b-c,c-d", "--mode",
        "dynamic", "--prefix", "a-b,c-d", "--cycle", "a-b,c-d", "--cycle", "a-b,b-c,c-d", "--cycle", "a-b,c-d", "--json",
        "--no-timestamp",
    ]);
    assert_eq!(code(&out), 1, "{}", stdout(&out));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["outcome"], "Loop");
    let nodes: Vec<&str> = report["nodes"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(nodes.windows(4).any(|w| w == ["b", "c", "x", "b"]), "{nodes:?}");
}

#[test]
fn list_corpus_names_cases() {
    let out = flaplab(&["list-corpus"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for name in ["fig1", "fig_spaa", "fig2-hdr3bits-dynamic", "prism"] {
        assert!(text.contains(name), "{name}");
    }
}
