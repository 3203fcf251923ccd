//! End-to-end tests of the `lei` binary: exit-code contract, JSON documents
//! and golden outputs.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn lei(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lei"))
        .args(args)
        .env_remove("LEI_DEPTH_DEFAULT")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON document")
}

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn preset_file(name: &str) -> String {
    format!("{}/../core/presets/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn demos_match_goldens() {
    for preset in ["lattice", "k-tense", "fundamental", "tense-fundamental", "lambek"] {
        let out = lei(&["demo", preset]);
        assert_eq!(code(&out), 0, "{preset}: {}", stdout(&out));
        assert_eq!(stdout(&out), golden(&format!("demo-{preset}.txt")), "{preset}");
    }
}

#[test]
fn demo_of_unknown_preset_is_a_usage_error() {
    assert_eq!(code(&lei(&["demo", "nonesuch"])), 2);
}

#[test]
fn fundamental_demo_reports_the_contradiction_interpolant() {
    let text = stdout(&lei(&["demo", "fundamental"]));
    assert!(text.contains("pass  interpolate p /\\ neg(p) |- q  =>  gamma = bot"));
}

#[test]
fn showcase_documents_match_goldens() {
    let out = lei(&["interpolate", "--sig", "fundamental", "(p /\\ neg(p)) |- q"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), golden("showcase-contradiction.json"));
    let out = lei(&["interpolate", "--sig", "fundamental", "dia(neg(p)) |- neg(box(p))"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), golden("showcase-dia-neg.json"));
}

#[test]
fn prove_exit_codes() {
    let out = lei(&["prove", "--sig", "lattice", "p |- q"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["result"], "NotProved");

    let out = lei(&["prove", "--sig", "lattice", "p /\\ q |- q /\\ p"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["result"], "Proved");
    assert_eq!(doc["derivation"]["sequent"], "p /\\ q |- q /\\ p");

    let out = lei(&["prove", "--sig", "k-tense", "--depth", "1", "dia(dia(box(p))) |- box(dia(dia(p)))"]);
    assert_eq!(code(&out), 3);
    assert_eq!(json(&out)["result"], "DepthExceeded");

    assert_eq!(code(&lei(&["prove", "--sig", "lattice", "p |-"])), 2);
    assert_eq!(code(&lei(&["prove", "--sig", "lattice", "foo(p) |- p"])), 2);
    assert_eq!(code(&lei(&["prove", "--sig", "no/such/file.lsig", "p |- p"])), 2);
    assert_eq!(code(&lei(&["prove", "p |- p"])), 2);
}

#[test]
fn depth_default_comes_from_the_environment() {
    let goal = "dia(dia(box(p))) |- box(dia(dia(p)))";
    let run = |depth: &str| {
        Command::new(env!("CARGO_BIN_EXE_lei"))
            .args(["prove", "--sig", "k-tense", goal])
            .env("LEI_DEPTH_DEFAULT", depth)
            .output()
            .unwrap()
    };
    let out = run("1");
    assert_eq!(code(&out), 3);
    assert_eq!(json(&out)["depth_limit"], 1);
    assert_eq!(code(&run("64")), 0);
    assert_eq!(code(&run("lots")), 2);
    assert_eq!(json(&lei(&["prove", "--sig", "lattice", "p |- p"]))["depth_limit"], 64);
}

#[test]
fn structural_rules_can_be_disabled() {
    let goal = "box(p) |- box(box(p))";
    assert_eq!(code(&lei(&["prove", "--sig", "k-tense", goal])), 0);
    assert_eq!(code(&lei(&["prove", "--sig", "k-tense", "--structural", "none", goal])), 1);
}

#[test]
fn emitted_derivation_is_the_reported_one() {
    let dir = std::env::temp_dir().join(format!("lei-emit-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("proof.json");
    let out = lei(&[
        "prove",
        "--sig",
        "fundamental",
        "p |- neg(neg(p))",
        "--emit",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let emitted: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(emitted, json(&out)["derivation"]);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn signature_check() {
    let out = lei(&["sig", "check", &preset_file("fundamental.lsig")]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["valid"], true);
    assert_eq!(doc["logic"], "fundamental");
    let names: Vec<&str> = doc["connectives"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"blacksquare") && names.contains(&"neg"));

    let dir = std::env::temp_dir().join(format!("lei-sig-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let open = dir.join("open.lsig");
    fs::write(&open, "conn F f 2 +-\n").unwrap();
    let doc = json(&lei(&["sig", "check", open.to_str().unwrap()]));
    let added: Vec<&str> = doc["added_residuals"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["order_type"].as_str().unwrap())
        .collect();
    assert_eq!(added, ["(1,1)", "(1,∂)"]);
    let bad = dir.join("bad.lsig");
    fs::write(&bad, "conn F f 2 +x\n").unwrap();
    assert_eq!(code(&lei(&["sig", "check", bad.to_str().unwrap()])), 2);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn rule_classification() {
    for target in [preset_file("fundamental.lrul"), "fundamental".to_string()] {
        let out = lei(&["rules", "classify", &target]);
        assert_eq!(code(&out), 0);
        let doc = json(&out);
        let class = |rule: &str| {
            doc.as_array()
                .unwrap()
                .iter()
                .find(|r| r["rule"] == rule)
                .map(|r| r["classification"].as_str().unwrap().to_string())
                .unwrap()
        };
        assert_eq!(class("negation"), "not-special");
        assert_eq!(class("dia-neg"), "interpolation-safe");
    }
    let out = lei(&["rules", "classify", &preset_file("k-tense.lrul")]);
    assert!(json(&out)
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["interpolation_safe"] == true));
    assert_eq!(code(&lei(&["rules", "classify", "/nonexistent/x.lrul"])), 2);
}

#[test]
fn interpolate_document() {
    let out = lei(&["interpolate", "--sig", "lattice", "p /\\ q |- p \\/ r"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    for key in ["gamma", "epsilon", "left_proof", "ctx_proof", "polarity"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    assert_eq!(doc["epsilon"], "1");

    let out = lei(&["interpolate", "--sig", "lattice", "p /\\ q |- p \\/ r", "--occ", "succ"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["epsilon"], "∂");

    let out = lei(&["interpolate", "--sig", "k-tense", "dia(p) |- dia(p \\/ q)", "--simplify"]);
    assert_eq!(code(&out), 0);

    assert_eq!(code(&lei(&["interpolate", "--sig", "lattice", "p |- q"])), 1);
    assert_eq!(code(&lei(&["interpolate", "--sig", "lattice", "p |- p", "--occ", "ante.3"])), 2);
    assert_eq!(code(&lei(&["interpolate", "--sig", "lattice", "p |- p", "--occ", "middle"])), 2);
}

#[test]
fn verify_exit_codes() {
    let seq = "p /\\ q |- p \\/ r";
    let out = lei(&["verify", "--sig", "lattice", seq, "--gamma", "p"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["pass"], true);

    let out = lei(&["verify", "--sig", "lattice", seq, "--gamma", "q"]);
    assert_eq!(code(&out), 1);
    let doc = json(&out);
    assert_eq!(doc["pass"], false);
    assert!(doc["failure"].as_str().unwrap().contains("not derivable"));

    assert_eq!(code(&lei(&["verify", "--sig", "lattice", seq, "--gamma", "p /\\"])), 2);
}

#[test]
fn oracle_lines() {
    let out = lei(&["oracle", "--sig", "fundamental", "(p /\\ neg(p)) |- q", "--depth", "0"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "bot\n");

    let out = lei(&["oracle", "--sig", "lattice", "p /\\ q |- p \\/ r", "--depth", "1"]);
    let lines: Vec<String> = stdout(&out).lines().map(String::from).collect();
    assert!(lines.contains(&"p".to_string()));
    assert!(!lines.contains(&"q".to_string()) && !lines.contains(&"r".to_string()));
    let mut sorted = lines.clone();
    sorted.sort();
    assert_eq!(lines, sorted);

    assert_eq!(code(&lei(&["oracle", "--sig", "lattice", "p |- p"])), 2);
}

#[test]
fn usage_errors() {
    assert_eq!(code(&lei(&[])), 2);
    assert_eq!(code(&lei(&["frobnicate"])), 2);
    assert_eq!(code(&lei(&["prove", "--sig", "lattice", "--depth", "many", "p |- p"])), 2);
}
