use std::process::{Command, Output};

use serde_json::Value;

fn fpclab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpclab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let o = fpclab(&all);
    let v = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)));
    (o.status.code().unwrap(), v)
}

#[test]
fn curry_is_verified() {
    let o = fpclab(&["fpc-check", "\\f.(\\x.f(x x))(\\x.f(x x))"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "Verified");
}

#[test]
fn exit_codes_follow_the_verdict() {
    assert_eq!(fpclab(&["fpc-check", "K"]).status.code(), Some(1));
    assert_eq!(
        fpclab(&["fpc-check", "Upsilon", "--max-nodes", "500"]).status.code(),
        Some(2)
    );
    assert_eq!(fpclab(&["wfpc-check", "Upsilon"]).status.code(), Some(0));
    assert_eq!(fpclab(&["wfpc-check", "I"]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_three() {
    assert_eq!(fpclab(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(fpclab(&["parse", "\\x."]).status.code(), Some(3));
    assert_eq!(fpclab(&["term", "NoSuchThing"]).status.code(), Some(3));
    assert_eq!(fpclab(&["gen-classify", "P; R"]).status.code(), Some(3));
    assert_eq!(fpclab(&["replay", "no-such-script"]).status.code(), Some(3));
    assert_eq!(fpclab(&["fpc-check"]).status.code(), Some(3));
}

#[test]
fn boehm_approximant_of_theta() {
    let o = fpclab(&["bt", "--depth", "3", "THETA x"]);
    assert_eq!(stdout(&o).trim(), "x (x (x ⊥))");
}

#[test]
fn library_lookup() {
    let o = fpclab(&["term", "delta"]);
    assert_eq!(stdout(&o).trim(), "\\y x. x (y x)");
    let (code, v) = json(&["term", "C_2"]);
    assert_eq!(code, 0);
    assert_eq!(v["term"], "\\x y. x (x y)");
}

#[test]
fn parse_reports_free_variables() {
    let (code, v) = json(&["parse", "(\\x. x y) z"]);
    assert_eq!(code, 0);
    assert_eq!(v["free_vars"], serde_json::json!(["y", "z"]));
    assert_eq!(v["closed"], false);
}

#[test]
fn reduce_stops_at_normal_forms() {
    let o = fpclab(&["reduce", "(\\x. x) ((\\y. y) z)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().last().unwrap().split_whitespace().last(), Some("z"));
    let o = fpclab(&["reduce", "--strategy", "head", "--steps", "3", "Omega"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn delta_is_accretive() {
    let (code, v) = json(&["gen-classify", "[\\y x. x (y x)]"]);
    assert_eq!(code, 0);
    assert_eq!(v["accretive"]["status"], "evidence_for");
    for class in ["constant", "weakly_constant", "compact", "weakly_compact"] {
        let s = v[class]["status"].as_str().unwrap();
        assert!(["unknown", "refuted_up_to", "refuted"].contains(&s), "{class}: {s}");
    }
}

#[test]
fn fixed_point_certificate() {
    let (code, v) = json(&["gen-fix", "[\\y. Theta_y]"]);
    assert_eq!(code, 0);
    assert_eq!(v["complete"], true);
    assert_eq!(v["join"]["kind"], "joined");
    let (code, _) = json(&["gen-fix", "[delta]"]);
    assert_eq!(code, 2);
}

#[test]
fn extensional_equality_on_chosen_samples() {
    let o = fpclab(&[
        "gen-ext-eq",
        "[G_ck; K]",
        "[G_ck; C K]",
        "--sample",
        "Theta",
        "--sample",
        "Y",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let (code, v) = json(&["gen-ext-eq", "[K I]", "[K K]", "--sample", "Theta"]);
    assert_eq!(code, 1);
    assert_eq!(v["refuted"], true);
}

#[test]
fn single_replay_script() {
    let (code, v) = json(&["replay", "turing-fpc"]);
    assert_eq!(code, 0);
    assert_eq!(v["scripts"][0]["name"], "turing-fpc");
    assert_eq!(v["passed"], true);
}

#[test]
fn hunt_report_shape() {
    let (code, v) = json(&["hunt", "--size", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["candidates_scanned"], 1 + 2 + 4 + 13 + 42 + 139);
    assert_eq!(v["double_fpc_found"], serde_json::json!([]));
    assert_eq!(fpclab(&["hunt", "--size", "0"]).status.code(), Some(3));
}

#[test]
fn graph_as_dot() {
    let o = fpclab(&["graph", "--dot", "(\\x. x) ((\\y. y) z)"]);
    let out = stdout(&o);
    assert!(out.starts_with("digraph"));
    assert_eq!(out.matches("->").count(), 3);
    let (_, v) = json(&["graph", "Omega"]);
    assert_eq!(v["nodes"].as_array().unwrap().len(), 1);
}
