//! End-to-end runs of the binary on the bundled fixtures.

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_petri-causal")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn run_json(verb: &str, net: &str, extra: &[&str]) -> (i32, Value) {
    let path = fixture(net);
    let mut args = vec![verb, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let (code, stdout, stderr) = run(&args);
    assert!(code != 3, "{stderr}");
    (code, serde_json::from_str(&stdout).unwrap())
}

#[test]
fn corollary_on_fig1() {
    let (code, j) = run_json("corollary", "fig1.net", &[]);
    assert_eq!(code, 0);
    assert_eq!(j["structural"]["verdict"]["status"], "holds");
    assert_eq!(j["conflict_free"]["verdict"]["status"], "holds");
    assert_eq!(j["maximality"]["maximal_bd_count"], 1);
    assert_eq!(j["outcome"], "agrees");
}

#[test]
fn conflicts_on_fig2_report_the_ternary_conflict_at_m0() {
    let (code, j) = run_json("conflicts", "fig2.net", &[]);
    assert_eq!(code, 1);
    let general = &j[0];
    assert_eq!(general["property"], "conflict_free");
    let w = &general["verdict"]["witness"];
    assert_eq!(w["kind"], "conflict");
    assert_eq!(w["multiset"], serde_json::json!({"a": 1, "b": 1, "c": 1}));
    assert_eq!(w["marking"], serde_json::json!({"p": 2, "pa": 1, "pb": 1, "pc": 1, "pd": 1}));
    assert_eq!(j[2]["verdict"]["witness"]["place"], "p");
}

#[test]
fn simulate_fig1_abc() {
    let (code, j) = run_json("simulate", "fig1.net", &["--seq", "a b c"]);
    assert_eq!(code, 0);
    // one 4-token is left over: a and b each produce one, c consumes one
    assert_eq!(j["final_marking"], serde_json::json!({"4": 1, "5": 1}));
    assert_eq!(j["markings"].as_array().unwrap().len(), 4);
}

#[test]
fn simulate_reports_a_disabled_transition_as_failure() {
    let (code, j) = run_json("simulate", "fig1.net", &["--seq", "c"]);
    assert_eq!(code, 1);
    assert!(j["final_marking"].is_null());
    assert!(j["error"].as_str().unwrap().contains("position 0"));
}

#[test]
fn simulate_without_sequence_reports_reachability() {
    let (code, j) = run_json("simulate", "fig1.net", &[]);
    assert_eq!(code, 0);
    assert_eq!(j["reachable_markings"], 7);
    assert_eq!(j["enabled"], serde_json::json!(["a", "b"]));
    let (code, j) = run_json("simulate", "fig4.net", &[]);
    assert_eq!(code, 2);
    assert_eq!(j["closed"]["bound"]["kind"], "sequence_length");
}

#[test]
fn processes_policies_give_different_processes_in_one_class() {
    let (_, fifo) = run_json("processes", "fig1.net", &["--seq", "a b c"]);
    let (_, lifo) = run_json("processes", "fig1.net", &["--seq", "a b c", "--policy", "lifo"]);
    assert_ne!(fifo["canonical_form"], lifo["canonical_form"]);
    assert_eq!(fifo["bd_class"], lifo["bd_class"]);
    assert_eq!(fifo["cut_marking"], serde_json::json!({"4": 1, "5": 1}));
}

#[test]
fn processes_dump_shape() {
    let (code, j) = run_json("processes", "fig2.net", &["--seq", "a b", "--dump"]);
    assert_eq!(code, 0);
    let events = j["events"].as_array().unwrap();
    assert_eq!(events.len(), 2);
    assert_eq!(events[0], serde_json::json!({"id": 0, "transition": "a", "index": 0}));
    // five initial tokens plus one output per event
    assert_eq!(j["conditions"].as_array().unwrap().len(), 6 + 2);
    let (_, all) = run_json("processes", "fig1.net", &[]);
    assert_eq!(all["maximal_gr_count"], 2);
    assert_eq!(all["processes"].as_array().unwrap().len(), 2);
}

#[test]
fn maximality_on_remark_has_two_classes() {
    let (code, j) = run_json("maximality", "remark.net", &[]);
    assert_eq!(code, 0);
    assert_eq!(j["maximal_bd_count"], 2);
    assert_eq!(j["counts_are_lower_bounds"], false);
}

#[test]
fn traces_on_fig1() {
    let (code, j) = run_json("traces", "fig1.net", &[]);
    assert_eq!(code, 0);
    let abc = j["classes"].as_array().unwrap().iter().find(|c| c["canonical_member"] == serde_json::json!(["a", "b", "c"])).unwrap();
    assert_eq!(abc["size"], 4);
    assert_eq!(j["correspondence"]["verdict"]["status"], "holds");
    assert_eq!(j["max_len"], 6);
}

#[test]
fn correspond_respects_max_seq_len() {
    let (code, j) = run_json("correspond", "fig2.net", &["--max-seq-len", "3"]);
    assert_eq!(code, 0);
    assert_eq!(j["max_len"], 3);
}

#[test]
fn out_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let (code, stdout, _) = run(&["maximality", fixture("fig1.net").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let j: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(j["maximal_gr_count"], 2);
}

#[test]
fn usage_and_parse_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.net");
    std::fs::write(&bad, "place s\ntrans t\narc s u\n").unwrap();
    let (code, _, stderr) = run(&["simulate", bad.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(stderr.contains("bad.net:line 3"), "{stderr}");

    let fig1 = fixture("fig1.net");
    let fig1 = fig1.to_str().unwrap();
    for args in [
        vec!["frobnicate", fig1],
        vec!["simulate"],
        vec!["simulate", "/no/such/file.net"],
        vec!["simulate", fig1, "--seq", "a z"],
        vec!["simulate", fig1, "--policy", "random"],
        vec!["conflicts", fig1, "--seq", "a"],
        vec!["simulate", fig1, "--dump"],
        vec!["simulate", fig1, "--max-seq-len", "-1"],
    ] {
        assert_eq!(run(&args).0, 3, "{args:?}");
    }
    assert_eq!(run(&["--help"]).0, 0);
}
