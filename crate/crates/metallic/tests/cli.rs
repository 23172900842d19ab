//! End-to-end tests of the command-line interface: subcommand
//! behaviour, output formats, and the exit-status contract
//! (0 = checks passed, 1 = a mathematical check failed, 2 = usage or
//! parse error).

use std::path::PathBuf;
use std::process::{Command, Output};

use metallic::{ExactMatrix, SmoothMap, StructureKind, StructureSpec};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_metallic"))
        .args(args)
        .output()
        .expect("binary launches")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn json(output: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(output)).expect("stdout parses as JSON")
}

/// Write a fixture into the target-relative tmp dir and hand back its path.
fn fixture(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("metallic-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).expect("fixture written");
    path
}

#[test]
fn verify_accepts_a_canonical_structure_and_its_metric() {
    let spec =
        StructureSpec::canonical(StructureKind::Metallic { p: 1, q: 2 }, &[1, 1]).unwrap();
    let path = fixture("canonical.json", &spec.to_json());
    let out = run(&["verify", path.to_str().unwrap(), "--compat"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("passed"));
    assert!(text.contains("ok"));
    assert!(!text.contains("FAIL"));

    let out = run(&["verify", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["passed"], serde_json::json!(true));
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["ok"] == true));
    std::fs::remove_file(path).ok();
}

#[test]
fn verify_flags_a_failing_identity_with_exit_one() {
    let file = r#"{"kind": "metallic", "p": 1, "q": 1, "dim": 2, "J": [[1, 0], [0, 1]]}"#;
    let path = fixture("identity.json", file);
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("FAIL"));
    std::fs::remove_file(path).ok();
}

#[test]
fn verify_reports_usage_errors_with_exit_two() {
    // Missing metric under --compat.
    let file = r#"{"kind": "metallic", "p": 1, "q": 2, "dim": 2, "J": [[2, 0], [0, -1]]}"#;
    let path = fixture("no-metric.json", file);
    let out = run(&["verify", path.to_str().unwrap(), "--compat"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("metric"));
    std::fs::remove_file(path).ok();

    // Malformed JSON.
    let path = fixture("garbage.json", "not json at all");
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("parse"));
    std::fs::remove_file(path).ok();

    // Missing file.
    let out = run(&["verify", "/nonexistent/structure.json"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn classify_prints_the_copper_witness() {
    let out = run(&["classify", "1", "2", "product", "source"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("obstruction_vanishes"));
    assert!(text.contains("witness"));

    let out = run(&["classify", "1", "2", "product", "source", "--format", "json"]);
    let report = json(&out);
    assert_eq!(report["verdict"], serde_json::json!("obstruction_vanishes"));
    assert!(report["witness"].is_array());
    assert_eq!(report["alternate_reading"]["vanishes"], serde_json::json!(true));
}

#[test]
fn classify_reports_both_product_readings_where_they_disagree() {
    let out = run(&["classify", "2", "3", "product", "source", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    // Derivation-chain reading vanishes; square-root reading does not.
    assert_eq!(report["verdict"], serde_json::json!("obstruction_vanishes"));
    assert_eq!(report["alternate_reading"]["vanishes"], serde_json::json!(false));
    assert!(report["witness"].is_array());

    let text_out = run(&["classify", "2", "3", "product", "source"]);
    let text = stdout(&text_out);
    assert!(text.contains("square-root reading"));
    assert!(text.contains("non-zero"));
}

#[test]
fn classify_forced_constant_and_parameter_validation() {
    let out = run(&["classify", "1", "1", "complex", "source"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("forced_constant"));
    assert!(text.contains("5"));
    assert!(text.contains("none"));

    let out = run(&["classify", "0", "1", "golden", "source"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("positive"));

    let out = run(&["classify", "1", "1", "sideways", "source"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn enumerate_emits_ninety_deterministic_rows_for_a_three_grid() {
    let first = run(&["enumerate", "3", "3"]);
    assert_eq!(code(&first), 0);
    let second = run(&["enumerate", "3", "3"]);
    assert_eq!(stdout(&first), stdout(&second), "reruns are byte-identical");
    assert!(stdout(&first).contains("90 rows"));

    let out = run(&["enumerate", "3", "3", "--format", "json"]);
    let rows = json(&out);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 90);
    for row in rows {
        let object = row.as_object().unwrap();
        for key in ["p", "q", "family", "direction", "obstruction", "verdict", "witness"] {
            assert!(object.contains_key(key), "missing {key}");
        }
        assert_eq!(object.len(), 7);
    }
}

#[test]
fn enumerate_family_filter_keeps_the_exceptional_product_cells() {
    let out = run(&["enumerate", "3", "3", "--family", "product", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let rows = json(&out);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 18);
    assert!(rows.iter().all(|row| row["family"] == "product"));
    let vanishing: Vec<(i64, i64)> = rows
        .iter()
        .filter(|row| row["verdict"] == "obstruction_vanishes")
        .map(|row| (row["p"].as_i64().unwrap(), row["q"].as_i64().unwrap()))
        .collect();
    assert_eq!(vanishing, vec![(1, 2), (1, 2), (2, 3), (2, 3)]);

    let out = run(&["enumerate", "0", "3"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn tension_builtins_report_the_expected_verdicts() {
    let out = run(&["tension", "example32"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("totally_geodesic = true"));
    assert!(text.contains("harmonic = true"));

    let out = run(&["tension", "saddle"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("totally_geodesic = false"));
    assert!(text.contains("harmonic = true"));

    let out = run(&["tension", "quadratic", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    let point = &report["points"][0];
    assert_eq!(point["harmonic"], serde_json::json!(false));
    assert_eq!(point["tension"][0], serde_json::json!(4.0));
}

#[test]
fn tension_reads_map_files_and_point_files() {
    let map = SmoothMap::linear(ExactMatrix::from_integers(&[&[1, 0], &[0, 1], &[1, 1]]).unwrap());
    let map_path = fixture("embed.json", &map.to_json().unwrap());
    let points_path = fixture("points.json", "[[0.5, -1.5], [2.0, 3.0]]");
    let out = run(&[
        "tension",
        map_path.to_str().unwrap(),
        "--points",
        points_path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let report = json(&out);
    assert_eq!(report["points"].as_array().unwrap().len(), 2);
    assert!(report["points"]
        .as_array()
        .unwrap()
        .iter()
        .all(|p| p["totally_geodesic"] == true && p["harmonic"] == true));

    // Point of the wrong dimension → usage error.
    let bad_points = fixture("bad-points.json", "[[1.0, 2.0, 3.0]]");
    let out = run(&[
        "tension",
        map_path.to_str().unwrap(),
        "--points",
        bad_points.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);

    std::fs::remove_file(map_path).ok();
    std::fs::remove_file(points_path).ok();
    std::fs::remove_file(bad_points).ok();
}

#[test]
fn tension_usage_errors_exit_two() {
    let out = run(&["tension", "/nonexistent/map.json"]);
    assert_eq!(code(&out), 2);

    let out = run(&["tension", "quadratic", "--tol=-1"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("positive"));
}

#[test]
fn certificate_reports_both_verdicts_and_validates_parameters() {
    let out = run(&["certificate", "1", "1", "1", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("guaranteed_harmonic"));
    assert!(text.contains("coeff"));

    let out = run(&["certificate", "2", "8", "3", "4", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["verdict"], serde_json::json!("condition_fails"));
    assert_eq!(report["sigma_root_matched"], serde_json::json!(true));

    let out = run(&["certificate", "1", "1", "1", "0"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn demo_passes_and_prints_the_canonical_lines() {
    let out = run(&["demo"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for header in ["(p, q) = (1, 1)", "(p, q) = (1, 2)", "(p, q) = (2, 1)"] {
        assert!(text.contains(header), "missing {header}");
    }
    // Pushforward of the first eigen-direction: (σ, 0) for each case.
    assert!(text.contains("F_*(J1 H1)         = (1/2 + 1/2\u{221a}5, 0)"));
    assert!(text.contains("F_*(J1 H1)         = (2, 0)"));
    assert!(text.contains("F_*(J1 H1)         = (1 + \u{221a}2, 0)"));
    assert!(text.contains("vertical basis     = (1, -1, 0, 0), (0, 0, 1, -1)"));
    assert!(text.contains("harmonic = true"));
    assert!(text.contains("all cases passed   = true"));

    let out = run(&["demo", "--format", "json"]);
    let report = json(&out);
    assert_eq!(report["passed"], serde_json::json!(true));
    assert_eq!(report["cases"].as_array().unwrap().len(), 3);
}

#[test]
fn every_json_report_reparses() {
    let spec = StructureSpec::canonical(StructureKind::Golden, &[2, 1]).unwrap();
    let path = fixture("golden.json", &spec.to_json());
    let commands: Vec<Vec<&str>> = vec![
        vec!["verify", path.to_str().unwrap()],
        vec!["classify", "3", "4", "para_contact", "target"],
        vec!["enumerate", "2", "2"],
        vec!["tension", "saddle"],
        vec!["certificate", "1", "1", "2", "1"],
        vec!["demo"],
    ];
    for mut args in commands {
        args.extend(["--format", "json"]);
        let out = run(&args);
        assert_eq!(code(&out), 0, "{args:?} stderr: {}", stderr(&out));
        let _ = json(&out);
    }
    std::fs::remove_file(path).ok();
}
