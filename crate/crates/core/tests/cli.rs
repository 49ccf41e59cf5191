use std::path::PathBuf;
use std::process::Command;

use gsp4_core::cli::run;
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).to_string_lossy().into_owned()
}

fn gsp4(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("gsp4").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = gsp4(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn adm_reports_counts() {
    let v = json(&["adm"]);
    assert_eq!(v["schema"], "gsp4.adm.v1");
    assert_eq!(v["count"], 63);
    let (code, _, _) = gsp4(&["adm", "--lambda", "1,2,0"]);
    assert_eq!(code, 2);
}

#[test]
fn ap_counts() {
    assert_eq!(json(&["ap"])["schema"], "gsp4.ap.v1");
    assert_eq!(json(&["ap"])["count"], 20);
    assert_eq!(json(&["ap", "--prime", "--f", "2"])["count"], 400);
}

#[test]
fn weights_from_fixture_and_inline() {
    let rb = fixture("rb1.json");
    let a = json(&["weights", "--rhobar", &rb, "--wq"]);
    let b = json(&["weights", "--rhobar", "s1,16,8,0", "--wq"]);
    assert_eq!(a["schema"], "gsp4.weights.v1");
    assert_eq!(a["weights"], b["weights"]);
    assert_eq!(a["weights"].as_array().unwrap().len(), 20);
}

#[test]
fn graph_json_and_dot() {
    let rb = fixture("rb1.json");
    let v = json(&["graph", "--rhobar", &rb]);
    assert_eq!(v["schema"], "gsp4.graph.v1");
    assert_eq!(v["connected"], true);
    let (code, dot, _) = gsp4(&["graph", "--rhobar", &rb, "--dot", "-"]);
    assert_eq!(code, 0);
    assert!(dot.starts_with("graph W {"), "{dot}");
    assert!(dot.trim_end().ends_with('}'));
    assert_eq!(dot.matches(" -- ").count(), 23);
}

#[test]
fn graph_chain_reaches_an_obvious_weight() {
    let rb = fixture("rb1.json");
    let v = json(&["graph", "--rhobar", &rb, "--chain", "44,18,17"]);
    let steps = v["chain"]["steered"].as_array().unwrap();
    assert!(!steps.is_empty());
    let (code, _, err) = gsp4(&["graph", "--rhobar", &rb, "--chain", "1,1,0"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn output_is_deterministic() {
    let rb = fixture("rb1.json");
    for args in [
        vec!["graph", "--rhobar", rb.as_str()],
        vec!["localmodel", "--verify-regcolone", "--draws", "5", "--seed", "3"],
    ] {
        let (_, a, _) = gsp4(&args);
        let (_, b, _) = gsp4(&args);
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn localmodel_commands() {
    let v = json(&["localmodel", "--verify-regcolone", "--draws", "10"]);
    assert_eq!(v["schema"], "gsp4.localmodel.regcolone.v1");
    assert_eq!(v["failed"], 0);
    let v = json(&["localmodel", "--shape", &fixture("shape_fixed_point.json")]);
    assert_eq!(v["schema"], "gsp4.localmodel.shape.v1");
    assert_eq!(v["shape"], "t(1,0;1)·s2s1s2∨");
    assert_eq!(v["in_adm_dual_eta"], true);
}

#[test]
fn cycles_commands() {
    let v = json(&["cycles", "--sigma", "44,18,17", "--bm"]);
    assert_eq!(v["schema"], "gsp4.cycles.bm.v1");
    let rb = fixture("rb1.json");
    let v = json(&["cycles", "--rhobar", &rb, "--tau", "s1,15,6,0", "--colength-one"]);
    assert_eq!(v["schema"], "gsp4.cycles.colength_one.v1");
    assert_eq!(v["cases"][0], "extremal");
    assert_eq!(v["components"].as_array().unwrap().len(), 1);
    // τ = ρ̄ sits at relative position e, which is not colength one.
    let (code, _, _) = gsp4(&["cycles", "--rhobar", &rb, "--tau", "s1,16,8,0", "--colength-one"]);
    assert_eq!(code, 2);
}

#[test]
fn selfcheck_passes() {
    let v = json(&["selfcheck"]);
    assert_eq!(v["schema"], "gsp4.selfcheck.v1");
    assert_eq!(v["ok"], true);
}

#[test]
fn validation_errors_exit_2() {
    for args in [
        vec!["selfcheck", "--p", "4"],
        vec!["selfcheck", "--p", "35"],
        vec!["selfcheck", "--box", "7"],
        vec!["selfcheck", "--f", "0"],
        vec!["weights", "--rhobar", "s1,40,8,0", "--wq"],
        vec!["graph", "--rhobar", "/nonexistent.json"],
    ] {
        let (code, _, err) = gsp4(&args);
        assert_eq!(code, 2, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
}

#[test]
fn unknown_command_exits_64() {
    assert_eq!(gsp4(&["frobnicate"]).0, 64);
    assert_eq!(gsp4(&[]).0, 64);
    assert_eq!(gsp4(&["--help"]).0, 0);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_gsp4");
    let code = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(code(&["selfcheck"]), Some(0));
    assert_eq!(code(&["selfcheck", "--p", "4"]), Some(2));
    assert_eq!(code(&["nope"]), Some(64));
}
