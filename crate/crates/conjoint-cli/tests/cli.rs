//! End-to-end runs of the compiled binary: exit codes, stream
//! separation, determinism, and output texture.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("../../fixtures/{name}.scenario"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conjoint"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn validate_clean_fixture_prints_ok() {
    let out = run(&["validate", fixture("bell").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "OK\n");
    assert!(stderr(&out).is_empty());
}

#[test]
fn validate_unnormalized_file_exits_one_with_listing() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(
        br#"{
            "format_version": 1,
            "preparation": {
                "amplitudes": [[1, 0], [1, 0]],
                "conditional_states": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]
            },
            "evolution": { "kind": "local", "operator": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]] }
        }"#,
    )
    .unwrap();
    file.flush().unwrap();
    let out = run(&["validate", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("preparation.amplitudes"));
    assert!(stdout(&out).contains("residual"));
}

#[test]
fn missing_file_exits_two() {
    let out = run(&["joint", "/no/such/file.scenario"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).is_empty());
    assert!(stderr(&out).contains("cannot read"));
}

#[test]
fn missing_required_flag_exits_two() {
    let out = run(&["sample", fixture("bell").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn zero_draws_exits_two() {
    let out = run(&["sample", fixture("bell").to_str().unwrap(), "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--n"));
}

#[test]
fn joint_bell_prints_diagonal_table() {
    let out = run(&["joint", fixture("bell").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("a=0     0.5000  0.0000"), "{text}");
    assert!(text.contains("a=1     0.0000  0.5000"), "{text}");
}

#[test]
fn joint_csv_of_interaction_reparses_to_expected_values() {
    let out = run(&[
        "joint",
        fixture("cnot-interaction").to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("a,b,p"));
    let got: Vec<f64> = lines
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    let want = [0.5, 0.0, 0.5, 0.0];
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() <= 1e-12);
    }
}

#[test]
fn retrodict_renders_two_thirds_at_four_decimals() {
    let out = run(&["retrodict", fixture("non-orthogonal").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0.6667"));
}

#[test]
fn retrodict_masks_the_unreachable_column() {
    let out = run(&["retrodict", fixture("cnot-interaction").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("—"), "{text}");
    assert!(text.contains("note: p(b=1) = 0"), "{text}");
}

#[test]
fn compare_interaction_reports_half() {
    let out = run(&["compare", fixture("cnot-interaction").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("total_variation  0.5000"));
}

#[test]
fn compare_embedded_local_reports_zero() {
    let out = run(&["compare", fixture("embedded-local-joint").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("total_variation  0.0000"));
}

#[test]
fn sample_is_byte_identical_per_seed() {
    let path = fixture("random-seeded");
    let args = [
        "sample",
        path.to_str().unwrap(),
        "--n",
        "5000",
        "--seed",
        "11",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn sample_single_outcome_has_zero_distance() {
    let out = run(&[
        "sample",
        fixture("single-outcome").to_str().unwrap(),
        "--n",
        "999",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(
        text.contains("tv_distance to exact table  0.000000"),
        "{text}"
    );
    assert!(text.contains("999"));
}

#[test]
fn joint_scenario_without_declared_evolution_fails_compare_only() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(
        br#"{
            "format_version": 1,
            "preparation": {
                "amplitudes": [[0.7071067811865476, 0], [0.7071067811865476, 0]],
                "conditional_states": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]
            },
            "evolution": {
                "kind": "joint",
                "operator": [
                    [[1, 0], [0, 0], [0, 0], [0, 0]],
                    [[0, 0], [1, 0], [0, 0], [0, 0]],
                    [[0, 0], [0, 0], [0, 0], [1, 0]],
                    [[0, 0], [0, 0], [1, 0], [0, 0]]
                ]
            }
        }"#,
    )
    .unwrap();
    file.flush().unwrap();
    let path = file.path().to_str().unwrap().to_string();

    let joint = run(&["joint", &path]);
    assert_eq!(joint.status.code(), Some(0), "{}", stderr(&joint));

    let compare = run(&["compare", &path]);
    assert_eq!(compare.status.code(), Some(1));
    assert!(
        stderr(&compare).contains("declares no local evolution"),
        "{}",
        stderr(&compare)
    );
}
