use std::path::Path;
use std::process::Command;

use serde_json::Value;
use valsgp::cli::run;

fn run_in_process(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("valsgp").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn binary(args: &[&str], envs: &[(&str, &str)]) -> (i32, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_valsgp"));
    cmd.args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    let output = cmd.output().unwrap();
    (
        output.status.code().unwrap(),
        String::from_utf8(output.stdout).unwrap(),
    )
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn semigroup_membership() {
    let (code, out, _) = run_in_process(&["semigroup", "--gens", "1/2,1/3", "--member", "6/5"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "false");
    let (code, out, _) = run_in_process(&["semigroup", "--gens", "1/2,1/3", "--member", "5/6"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "true");
    let (_, out, _) = run_in_process(&["semigroup", "--gens", "1/2,1/3", "--bound", "1"]);
    assert_eq!(out.trim(), "0/1, 1/3, 1/2, 2/3, 5/6, 1/1");
}

#[test]
fn default_chain_terminates_with_passing_audits() {
    let (code, out, _) = run_in_process(&[
        "--json",
        "chain",
        "--scenario",
        "default",
        "--advance",
        "1",
        "--steps",
        "auto",
        "--audit",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["steps"], 2);
    assert_eq!(v["terminated"], true);
    assert_eq!(v["audits_passed"], true);
    let last = &v["states"][2]["state"];
    assert_eq!(last["nuz"], "1/6");
    assert_eq!(last["nuw"], "1/6");
}

#[test]
fn chain_output_is_deterministic() {
    let args = ["--json", "chain", "--steps", "1", "--audit"];
    let (_, a, _) = run_in_process(&args);
    let (_, b, _) = run_in_process(&args);
    assert_eq!(a, b);
}

#[test]
fn scenario_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s.json");
    let (code, _, _) = run_in_process(&["scenario", "--out", path_str(&file)]);
    assert_eq!(code, 0);
    assert_eq!(
        std::fs::read_to_string(&file).unwrap().trim_end(),
        r#"{"characteristic":0,"prime_count":5,"depth":4,"l":1,"bound":"8/1"}"#
    );
    let (code, out, _) =
        run_in_process(&["chain", "--scenario", path_str(&file), "--steps", "auto"]);
    assert_eq!(code, 0);
    assert!(out.contains("2 step(s); chain terminated"));
}

#[test]
fn certificate_issue_recheck_and_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let (code, out, _) = run_in_process(&["certify", "prop1", "--out", path_str(&cert)]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("issued: gap 6/5"));
    let (code, out, _) = run_in_process(&["recheck", "--cert", path_str(&cert)]);
    assert_eq!((code, out.trim()), (0, "true"));

    let text = std::fs::read_to_string(&cert).unwrap();
    let tampered = dir.path().join("tampered.json");
    std::fs::write(
        &tampered,
        text.replace("\"gap\": \"6/5\"", "\"gap\": \"5/6\""),
    )
    .unwrap();
    let (code, out, _) = run_in_process(&["recheck", "--cert", path_str(&tampered)]);
    assert_eq!((code, out.trim()), (1, "false"));

    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    let (code, _, err) = run_in_process(&["recheck", "--cert", path_str(&garbage)]);
    assert_eq!(code, 2);
    assert!(err.contains("parse error"));
}

#[test]
fn certify_from_a_state_file() {
    let dir = tempfile::tempdir().unwrap();
    let chain = dir.path().join("chain.json");
    let (code, _, _) = run_in_process(&["chain", "--steps", "1", "--out", path_str(&chain)]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&chain).unwrap()).unwrap();
    let state = dir.path().join("state.json");
    std::fs::write(
        &state,
        serde_json::to_string(&v["states"][1]["state"]).unwrap(),
    )
    .unwrap();
    let (code, out, _) = run_in_process(&["certify", "prop1", "--state", path_str(&state)]);
    assert_eq!(code, 0);
    assert!(out.starts_with("issued: gap 8/15"), "{out}");
}

#[test]
fn lift_certificate() {
    let (code, out, _) = run_in_process(&["--json", "certify", "lift", "--bound", "4"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["certificate"]["all_project"], true);
    assert_eq!(v["truncation"]["exact"], true);
    assert_eq!(v["certificate"]["t_value"], serde_json::json!(["0/1", "1"]));
}

#[test]
fn oracle_subcommands() {
    for what in ["p-seq", "eq21", "strict"] {
        let (code, out, _) = run_in_process(&["oracle", "verify", "--what", what]);
        assert_eq!(code, 0, "{what}: {out}");
        assert!(out.ends_with("all checks passed\n"));
    }
    let (code, _, _) = run_in_process(&["oracle", "verify", "--what", "disc", "--p", "5"]);
    assert_eq!(code, 0);
    let (code, _, _) = run_in_process(&[
        "oracle", "verify", "--what", "disc", "--p", "3", "--char", "2",
    ]);
    assert_eq!(code, 0);
    let (code, out, _) = run_in_process(&[
        "oracle", "verify", "--what", "p-seq", "--depth", "2", "--dump",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("(-1 - 1*t) * x^6"));
}

#[test]
fn invalid_input_exits_2_without_partial_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.json");
    let (code, _, err) = run_in_process(&["scenario", "--depth", "1", "--out", path_str(&out)]);
    assert_eq!(code, 2);
    assert!(err.contains("invalid input"));
    assert!(!out.exists());

    let missing = dir.path().join("missing.json");
    let cert = dir.path().join("cert.json");
    let (code, _, _) = run_in_process(&[
        "certify",
        "prop1",
        "--state",
        path_str(&missing),
        "--out",
        path_str(&cert),
    ]);
    assert_eq!(code, 2);
    assert!(!cert.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);

    let (code, _, _) = run_in_process(&["semigroup", "--gens", "1/2,x"]);
    assert_eq!(code, 2);
    let (code, _, _) = run_in_process(&["chain", "--steps", "many"]);
    assert_eq!(code, 2);
    let (code, _, _) = run_in_process(&[
        "oracle", "verify", "--what", "disc", "--p", "2", "--char", "2",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn process_exit_codes() {
    let (code, out) = binary(&["semigroup", "--gens", "1/2,1/3", "--member", "6/5"], &[]);
    assert_eq!((code, out.trim()), (0, "false"));
    let (code, _) = binary(&["semigroup", "--gens", "1/2,1/3", "--member", "-1"], &[]);
    assert_eq!(code, 2);
    let (code, _) = binary(
        &["semigroup", "--gens", "1/1000,1", "--bound", "100"],
        &[("VALSGP_DP_CAP", "50")],
    );
    assert_eq!(code, 3);
    let (code, _) = binary(
        &["oracle", "verify", "--what", "p-seq", "--depth", "3"],
        &[("VALSGP_TERM_CAP", "3")],
    );
    assert_eq!(code, 3);
    let (code, _) = binary(&["oracle", "verify", "--what", "disc", "--p", "2"], &[]);
    assert_eq!(code, 1);
    let (code, _) = binary(&["--help"], &[]);
    assert_eq!(code, 0);
}
