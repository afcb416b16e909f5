use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn pairstab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pairstab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(&pairstab(args))).unwrap()
}

/// Values of column `col` below the CSV header.
fn csv_column(text: &str, col: usize) -> Vec<f64> {
    text.lines().skip(1).map(|l| l.split(',').nth(col).unwrap().parse().unwrap()).collect()
}

#[test]
fn bell_dies_near_critical_time() {
    let text = stdout(&pairstab(&["evolve", "--state", "bell", "--t-max", "0.549", "--steps", "50"]));
    assert!(text.starts_with("t,C,label\n"));
    let c = csv_column(&text, 1);
    assert_eq!(c[0], 1.0);
    assert!(c.last().unwrap().abs() < 1e-3);
    assert!(c.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn maximally_mixed_stays_separable() {
    let text = stdout(&pairstab(&["evolve", "--state", "maximally-mixed", "--steps", "11"]));
    assert!(csv_column(&text, 1).iter().all(|&c| c == 0.0));
}

#[test]
fn critical_time_of_bell_pair() {
    let text = stdout(&pairstab(&["critical", "--c0", "1"]));
    assert_eq!(text, "C0,kappa_Tc\n1,0.549306144334\n");
    let v = json(&["critical", "--c0", "0", "--c0", "0.5", "--format", "json"]);
    assert_eq!(v["rows"][0]["kappa_Tc"], 0.0);
    assert!((v["rows"][1]["kappa_Tc"].as_f64().unwrap() - 2f64.ln() / 2.0).abs() < 1e-12);
}

#[test]
fn werner_state_is_depolarized_pure() {
    let v = json(&["dps", "--state", "werner:0.8"]);
    assert_eq!(v["is_dps"], true);
    let t0 = v["t0"].as_f64().unwrap();
    assert!((t0 - (0.8f64.sqrt().recip()).ln()).abs() < 1e-8, "t0 {t0}");
}

#[test]
fn bell_pair_has_zero_depolarizing_age() {
    let v = json(&["dps", "--state", "bell"]);
    assert_eq!(v["is_dps"], true);
    assert!(v["t0"].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn mixed_preset_is_not_depolarized_pure() {
    let v = json(&["dps", "--state", "mixed:0.4", "--seed", "3"]);
    assert_eq!(v["is_dps"], false);
    assert!(v["t0"].is_null());
}

#[test]
fn heisenberg_ring_matches_closed_form() {
    let text = stdout(&pairstab(&["spin", "--gamma", "1", "--n-sites", "4", "--steps", "21"]));
    assert!(text.starts_with("t,C_pipeline,C_closed_form,gap\n"));
    let pipeline = csv_column(&text, 1);
    assert!((pipeline[0] - 0.5).abs() < 1e-12);
    assert!(csv_column(&text, 3).iter().all(|&g| g <= 1e-9));
}

#[test]
fn anisotropic_ring_runs_with_negative_gamma() {
    let v = json(&["spin", "--gamma", "-0.5", "--n-sites", "6", "--steps", "3", "--format", "json"]);
    assert_eq!(v["n_sites"], 6);
    assert!(v["rows"].as_array().unwrap().len() == 3);
}

#[test]
fn identity_channel_leaves_search_flat() {
    let v = json(&["optimize", "--channel", "identity", "--c0", "0.6", "--samples", "200"]);
    let c0 = v["c0"].as_f64().unwrap();
    assert!((c0 - 0.6).abs() < 1e-12);
    for key in ["sampled_best", "sampled_worst", "best", "residual_max"] {
        assert!((v[key].as_f64().unwrap() - c0).abs() < 1e-9, "{key}");
    }
}

#[test]
fn dephasing_search_never_beats_closed_form() {
    let v = json(&["optimize", "--channel", "dephasing:0.3", "--lambda1", "0.8", "--samples", "500"]);
    let best = v["sampled_best"].as_f64().unwrap();
    assert!(best <= v["residual_max"].as_f64().unwrap() + 1e-9);
    assert!(v["oracle_gap"].as_f64().unwrap() < 1e-9);
}

#[test]
fn surface_has_full_grid() {
    let text = stdout(&pairstab(&["surface", "--c0-steps", "5", "--steps", "7"]));
    assert_eq!(text.lines().count(), 1 + 5 * 7);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let args = ["evolve", "--state", "mixed:0.7", "--random-mixed", "3", "--seed", "11", "--steps", "9"];
    assert_eq!(stdout(&pairstab(&args)), stdout(&pairstab(&args)));
    let args = ["optimize", "--samples", "300", "--seed", "5"];
    assert_eq!(stdout(&pairstab(&args)), stdout(&pairstab(&args)));
}

#[test]
fn seed_changes_random_draws() {
    let a = stdout(&pairstab(&["optimize", "--samples", "50", "--seed", "1"]));
    let b = stdout(&pairstab(&["optimize", "--samples", "50", "--seed", "2"]));
    assert_ne!(a, b);
}

#[test]
fn inline_json_state_is_accepted() {
    let state = r#"{"re":[[0.5,0,0,0.5],[0,0,0,0],[0,0,0,0],[0.5,0,0,0.5]],"im":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#;
    let text = stdout(&pairstab(&["evolve", "--state", state, "--steps", "2", "--t-max", "0.1"]));
    assert_eq!(csv_column(&text, 1)[0], 1.0);
}

#[test]
fn bad_configuration_exits_with_two() {
    let cases: &[&[&str]] = &[
        &["evolve", "--state", "garbage"],
        &["critical", "--c0", "1.5"],
        &["spin", "--n-sites", "5"],
        &["evolve", "--kappa=-1"],
        &["evolve", "--channel", "pauli:0.5,0.5"],
        &["evolve", "--state", "werner:2"],
        &["evolve", "--state", r#"{"re":[[2,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]],"im":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#],
    ];
    for args in cases {
        let out = pairstab(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("pairstab: "));
    }
}

#[test]
fn output_file_is_written_whole() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let p = path.to_str().unwrap();
    let out = pairstab(&["critical", "--c0", "1", "--out", p]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read_to_string(&path).unwrap(), "C0,kappa_Tc\n1,0.549306144334\n");
}

#[test]
fn failed_run_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("never.csv");
    let out = pairstab(&["critical", "--c0", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!path.exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn failed_run_keeps_previous_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("keep.csv");
    fs::write(&path, "old\n").unwrap();
    let out = pairstab(&["spin", "--n-sites", "7", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(fs::read_to_string(&path).unwrap(), "old\n");
}

#[test]
fn unwritable_output_is_a_configuration_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("x.csv");
    let out = pairstab(&["critical", "--c0", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
