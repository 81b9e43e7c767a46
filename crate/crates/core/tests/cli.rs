use std::process::Command;

use periodika::cli::{run, EXIT_OK, EXIT_PARSE, EXIT_RESOURCE};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("periodika").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8_lossy(&out).into_owned(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn classify_rule_90() {
    let (code, out, _) = call(&[
        "classify",
        "--rule",
        "additive:m=2;r=1;c=1,0,1",
        "--format",
        "json",
    ]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["stp"], "Empty");
    assert_eq!(v["transitive"], true);
}

#[test]
fn classify_matches_golden_files() {
    for (rule, golden) in [
        (
            "additive:m=2;r=1;c=1,0,1",
            include_str!("golden/rule90.json"),
        ),
        (
            "additive:m=4;r=1;c=2,1,2",
            include_str!("golden/m4_212.json"),
        ),
        (
            "additive:m=2;r=1;c=0,0,1",
            include_str!("golden/shift.json"),
        ),
    ] {
        let (code, out, _) = call(&["classify", "--rule", rule]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out, golden, "{rule}");
    }
}

#[test]
fn simulate_pascal_triangle() {
    let (code, out, _) = call(&[
        "simulate",
        "--rule",
        "wolfram:90",
        "--config",
        "ep:0|1|0",
        "--steps",
        "2",
        "--window",
        "-3:3",
        "--format",
        "ascii",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "0001000\n0010100\n0100010\n");
}

#[test]
fn simulate_pgm_is_binary_p5() {
    let (code, out, _) = call(&[
        "simulate",
        "--rule",
        "wolfram:170",
        "--config",
        "cyclic:10",
        "--steps",
        "1",
        "--window",
        "0:3",
        "--format",
        "pgm",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("P5\n4 2\n255\n"));
}

#[test]
fn simulate_reports_cycles() {
    let (code, out, _) = call(&[
        "simulate",
        "--rule",
        "additive:m=4;r=1;c=2,1,2",
        "--config",
        "ep:0|1|0",
        "--steps",
        "2",
        "--cycle",
    ]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["cycle"]["preperiod"], 0);
    assert_eq!(v["cycle"]["period"], 2);
    assert_eq!(v["max_steps"], 100_000);
}

#[test]
fn sweep_finds_no_disagreement() {
    let (code, out, _) = call(&["sweep", "--m", "6", "--r", "1", "--check-oracles"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rules"], 216);
    assert_eq!(
        v["oracle_checks"]["surjectivity_disagreements"],
        serde_json::json!([])
    );
    assert_eq!(
        v["oracle_checks"]["equicontinuity_disagreements"],
        serde_json::json!([])
    );
}

#[test]
fn searches_echo_their_bounds() {
    let (code, out, _) = call(&["blocking", "--rule", "additive:m=4;r=1;c=2,1,2"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["bounds"]["k_max"], 6);
    assert_eq!(v["certificate"]["status"], "Exact");

    let (code, out, _) = call(&["scan", "--rule", "wolfram:90"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(
        (
            v["tail_period_max"].clone(),
            v["mid_len_max"].clone(),
            v["t_max"].clone()
        ),
        (2.into(), 3.into(), 32.into())
    );
    assert_eq!(v["violations"], serde_json::json!([]));

    let (code, out, _) = call(&["jp", "--rule", "wolfram:90", "--n", "3"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("\"cyclic:011\""));
    assert!(!out.contains("\"cyclic:1\""));
}

#[test]
fn witnesses() {
    let (_, out, _) = call(&["witness", "--rule", "additive:m=6;r=1;c=4,1,4"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["witness"]["config"], "ep:0|3|0");

    let (_, out, _) = call(&[
        "witness",
        "--rule",
        "additive:m=4;r=1;c=2,1,2",
        "--product",
        "wolfram:90",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(!v["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn failures_map_to_exit_codes() {
    let (code, _, err) = call(&["classify", "--rule", "additive:m=4;r=1;c=2,1"]);
    assert_eq!(code, EXIT_PARSE);
    assert!(err.contains("position 19"));
    assert_eq!(
        call(&["simulate", "--rule", "wolfram:90", "--config", "ep:0|1|"]).0,
        EXIT_PARSE
    );
    assert_eq!(
        call(&["simulate", "--rule", "wolfram:90", "--config", "cyclic:2"]).0,
        EXIT_PARSE
    );
    assert_eq!(
        call(&["jp", "--rule", "wolfram:90", "--n", "40"]).0,
        EXIT_RESOURCE
    );
    assert_eq!(
        call(&["classify", "--rule", "wolfram:90", "--format", "pgm"]).0,
        EXIT_PARSE
    );
    assert_eq!(
        call(&[
            "classify",
            "--rule",
            "wolfram:90",
            "--out",
            "/nonexistent/dir/x.json"
        ])
        .0,
        1
    );
}

#[test]
fn output_is_deterministic_and_round_trips() {
    let args = ["classify", "--rule", "additive:m=6;r=1;c=4,1,4"];
    let (_, a, _) = call(&args);
    let (_, b, _) = call(&args);
    assert_eq!(a, b);
    let report = periodika::additive::ClassificationReport::from_json(&a).unwrap();
    assert_eq!(report.to_json() + "\n", a);
}

#[test]
fn binary_writes_files() {
    let dir = std::env::temp_dir().join(format!("periodika-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("trace.pgm");
    let status = Command::new(env!("CARGO_BIN_EXE_periodika"))
        .args([
            "simulate",
            "--rule",
            "wolfram:90",
            "--config",
            "ep:0|1|0",
            "--steps",
            "3",
            "--format",
            "pgm",
            "--out",
        ])
        .arg(&path)
        .status()
        .unwrap();
    assert!(status.success());
    let bytes = std::fs::read(&path).unwrap();
    assert!(bytes.starts_with(b"P5\n33 4\n255\n"));
    assert_eq!(bytes.len(), "P5\n33 4\n255\n".len() + 33 * 4);
    std::fs::remove_dir_all(&dir).unwrap();
}
