use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_raag-atlas");

fn data(name: &str) -> String {
    format!("{}/data/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("RAAG_ATLAS_WORKERS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_golden_files() {
    let expect = [
        ("four-vertex-sinkhole", true, false),
        ("cone-cone", true, true),
        ("non-sinkhole", false, false),
        ("cone-stage", true, true),
        ("six-vertex-cone", true, true),
        ("three-cycle", false, false),
        ("torsion-triangle-1", false, false),
        ("torsion-triangle-2", false, false),
        ("triangle-first", false, false),
        ("triangle-second", false, false),
        ("line-ordinary", false, false),
        ("line-special", false, false),
        ("lambda", true, false),
        ("square", true, false),
        ("path4", true, false),
    ];
    for (name, special, elementary) in expect {
        let v = json(&["classify", &data(name)]);
        assert_eq!(v["special"], special, "{name}");
        assert_eq!(v["elementary_type"], elementary, "{name}");
        assert_eq!(v["classifiers_agree"], true, "{name}");
    }
}

#[test]
fn classify_certificates() {
    let v = json(&["classify", &data("four-vertex-sinkhole")]);
    assert_eq!(v["witness"]["kind"], "lambda");
    assert_eq!(v["witness"]["vertices"], serde_json::json!(["v2", "v1", "v4"]));
    assert_eq!(v["stuck"], serde_json::json!(["v1", "v2", "v4"]));
    let v = json(&["classify", &data("non-sinkhole")]);
    assert_eq!(v["offender"]["vertex"], "v1");
    let v = json(&["classify", &data("square")]);
    assert_eq!(v["witness"]["kind"], "square");
    let v = json(&["classify", &data("path4")]);
    assert_eq!(v["witness"]["kind"], "path4");
}

#[test]
fn decompose_text_tree() {
    let out = run(&["decompose", &data("cone-cone"), "--format", "text"]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "Cone(v4, Cone(v2, Union(Leaf v1, Leaf v3)))\n"
    );
}

#[test]
fn present_formats() {
    let v = json(&["present", &data("lambda"), "--p", "3", "--f", "1"]);
    assert_eq!(v["relators"].as_array().unwrap().len(), 2);
    let cas = run(&["present", &data("lambda"), "--p", "3", "--f", "1", "--format", "cas"]);
    let text = String::from_utf8(cas.stdout).unwrap();
    assert!(text.contains("F.1*F.2*F.1^-1*F.2^-4"), "{text}");
    let bad = run(&["present", &data("lambda"), "--p", "2", "--f", "1"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn census_and_padic() {
    let v = json(&["census", "--n", "2"]);
    assert_eq!(v["total"], 4);
    let v = json(&["census", "--n", "3", "--dedup-iso"]);
    assert_eq!((v["total"].as_u64(), v["elementary_type"].as_u64()), (Some(64), Some(26)));
    assert_eq!(v["isomorphism_classes"]["classes"], 16);
    let v = json(&["padic", "check", "--p", "3", "--f", "2"]);
    assert_eq!(v["all_hold"], true);
    assert_eq!(v["exponent_solve"]["round_trip"], true);
    assert_eq!(run(&["census", "--n", "9"]).status.code(), Some(1));
}

#[test]
fn witnesses_verify() {
    for args in [
        &["witness", "heisenberg", "--p", "3"][..],
        &["witness", "triangle", "--p", "3", "--f", "1", "--kind", "second"],
        &["witness", "line", "--p", "5", "--f", "1"],
        &["witness", "hnn", "--p", "2", "--precision", "6"],
        &["witness", "torsion", "--p", "2", "--f", "2"],
        &["witness", "square"],
    ] {
        let v = json(args);
        let claims = v["claims"].as_array().unwrap();
        assert!(!claims.is_empty());
        assert!(
            claims.iter().all(|c| c["verdict"] == "verified" || c["verdict"] == "citation-only"),
            "{args:?}"
        );
    }
    assert_eq!(run(&["witness", "triangle", "--p", "3"]).status.code(), Some(1));
}

#[test]
fn massey_commands() {
    let v = json(&["massey", "scan", &data("cone-stage"), "--p", "2", "--f", "2"]);
    assert_eq!(v["triples"], 512);
    assert_eq!(v["violations"], serde_json::json!([]));
    let v = json(&[
        "massey", "lift", &data("lambda"), "--p", "2", "--f", "2", "--alpha", "0,0,0", "--alpha", "0,0,0", "--alpha",
        "0,0,0",
    ]);
    assert_eq!((v["defined"].as_bool(), v["vanishes"].as_bool()), (Some(true), Some(true)));
    let short = run(&["massey", "lift", &data("lambda"), "--p", "2", "--f", "2", "--alpha", "1,0"]);
    assert_eq!(short.status.code(), Some(1));
    let over = run(&["massey", "scan", &data("square"), "--p", "3", "--f", "1"]);
    assert_eq!(over.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&over.stderr).contains("531441"));
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"vertices": ["a"], "pairs": [{"a": "a", "b": "zz", "state": "ordinary"}]}"#).unwrap();
    assert_eq!(run(&["classify", bad.to_str().unwrap()]).status.code(), Some(1));
    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(run(&["classify", bad.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(run(&["classify", "/nonexistent.json"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["census", "--n", "2", "--format", "dot"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_file_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.dot");
    let out = run(&["export-dot", &data("lambda"), "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.contains("\"y\" -> \"x\"") && dot.contains("fillcolor=black"));
}

#[test]
fn worker_count_does_not_change_reports() {
    let base = run(&["census", "--n", "4", "--dedup-iso", "--workers", "1"]).stdout;
    for w in ["2", "5"] {
        assert_eq!(run(&["census", "--n", "4", "--dedup-iso", "--workers", w]).stdout, base);
    }
    let env = Command::new(BIN)
        .args(["census", "--n", "4", "--dedup-iso"])
        .env("RAAG_ATLAS_WORKERS", "3")
        .output()
        .unwrap();
    assert_eq!(env.stdout, base);
}
