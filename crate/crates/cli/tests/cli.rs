//! End-to-end tests of the `hermcount` binary: JSON schemas, exit codes,
//! file emission and output determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hermcount"))
}

fn form_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../forms")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn count_gauss_t1_totals_four() {
    let form = form_path("i21_gauss.json");
    let out = run(&["count", "--form", form.to_str().unwrap(), "--k", "1", "--t", "1"]);
    let v = stdout_json(&out);
    assert_eq!(v["total"], 4);
    assert_eq!(v["mode"], "slab");
    assert_eq!(v["t"], "1");
    assert_eq!(v["norm_bound"], 1);
}

#[test]
fn count_with_oracle_and_shells() {
    let form = form_path("i21_gauss.json");
    let out = run(&[
        "count",
        "--form",
        form.to_str().unwrap(),
        "--k",
        "1",
        "--t",
        "5",
        "--oracle",
        "--shells",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["oracle_matches"], true);
    assert_eq!(v["total"], v["oracle_total"]);
    let shells = v["shells"].as_array().unwrap();
    assert!(!shells.is_empty());
    let total: u64 = shells
        .iter()
        .map(|s| s["contribution"].as_u64().unwrap())
        .sum();
    assert_eq!(v["total"].as_u64().unwrap(), total);
}

#[test]
fn count_ball_mode_uses_s_key() {
    let form = form_path("i21_gauss.json");
    let out = run(&[
        "count",
        "--form",
        form.to_str().unwrap(),
        "--k",
        "1",
        "--t",
        "3/2",
        "--mode",
        "ball",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["mode"], "ball");
    assert_eq!(v["s"], "3/2");
    assert!(v.get("t").is_none());
}

#[test]
fn shells_csv_emission() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("shells.csv");
    let form = form_path("i21_gauss.json");
    let out = run(&[
        "count",
        "--form",
        form.to_str().unwrap(),
        "--k",
        "1",
        "--t",
        "4",
        "--emit",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "u,R_O,r_A,contribution");
    let first = lines.next().unwrap();
    assert_eq!(first, "1,4,1,4");
}

#[test]
fn density_single_prime_json() {
    let form = form_path("i21_gauss.json");
    let out = run(&[
        "density",
        "--form",
        form.to_str().unwrap(),
        "--k",
        "1",
        "--p",
        "5",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["p"], 5);
    assert_eq!(v["stabilized"], true);
    assert_eq!(v["value"], "124/125");
    assert_eq!(v["trace"].as_array().unwrap().len(), 2);
}

#[test]
fn density_product_with_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("density.json");
    let form = form_path("i21_gauss.json");
    let out = run(&[
        "density",
        "--form",
        form.to_str().unwrap(),
        "--k",
        "1",
        "--pmax",
        "50",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["p_max"], 50);
    assert_eq!(v["bad_primes"], serde_json::json!([2]));
    assert_eq!(v["partial_trace"].as_array().unwrap().len(), 3);
    let from_file: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v, from_file);
}

#[test]
fn coefficient_matches_published_value() {
    let form = form_path("i21_gauss.json");
    let out = run(&[
        "coefficient",
        "--form",
        form.to_str().unwrap(),
        "--k",
        "1",
        "--pmax",
        "200",
    ]);
    let v = stdout_json(&out);
    let c = v["coefficient_f64"].as_f64().unwrap();
    assert!((c - 12.0).abs() / 12.0 <= 0.02, "C = {c}");
    assert_eq!(v["two_rho"], 4);
    assert_eq!(v["rho"], "2");
}

#[test]
fn verify_emits_fit_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("series.csv");
    let form = form_path("i31_real.json");
    let out = run(&[
        "verify",
        "--form",
        form.to_str().unwrap(),
        "--k",
        "1",
        "--t",
        "50,100,200",
        "--pmax",
        "50",
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    let v = stdout_json(&out);
    let exponent = v["fit"]["exponent"].as_f64().unwrap();
    assert!((exponent - 2.0).abs() < 0.2, "exponent {exponent}");
    let text = std::fs::read_to_string(&csv_path).unwrap();
    assert!(text.starts_with("t,N_t,prediction,ratio\n"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn sweep_csv_and_json() {
    let form = form_path("i21_gauss.json");
    let out = run(&[
        "sweep",
        "--form",
        form.to_str().unwrap(),
        "--k",
        "1",
        "--t",
        "5,10",
        "--pmax",
        "50",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("t,N_t,prediction,ratio\n"));
    assert_eq!(text.lines().count(), 3);

    let out = run(&[
        "sweep",
        "--form",
        form.to_str().unwrap(),
        "--k",
        "1",
        "--t",
        "5,10",
        "--pmax",
        "50",
        "--format",
        "json",
        "--mode",
        "ball",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["mode"], "ball");
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn sweep_ratio_column_approaches_coefficient() {
    // three-row sweep for the Gaussian example: the ratio column is the
    // empirical coefficient N_t / t^4 and approaches 12
    let form = form_path("i21_gauss.json");
    let out = run(&[
        "sweep",
        "--form",
        form.to_str().unwrap(),
        "--k",
        "1",
        "--t",
        "50,100,200",
        "--pmax",
        "50",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let last = text.lines().last().unwrap();
    let ratio: f64 = last.split(',').nth(3).unwrap().parse().unwrap();
    assert!((ratio - 12.0).abs() < 0.1, "ratio column: {last}");
}

#[test]
fn deterministic_output() {
    let form = form_path("i21_gauss.json");
    let args = [
        "density",
        "--form",
        form.to_str().unwrap(),
        "--k",
        "1",
        "--pmax",
        "30",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout, "outputs must be byte-identical");
}

#[test]
fn exit_code_2_on_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    // non-hermitian matrix
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"domain": {"kind": "imag_quad", "D": 1}, "n": 2,
            "A": [[[2,0],[1,1]],[[1,1],[3,0]]], "a": 1}"#,
    )
    .unwrap();
    let out = run(&["count", "--form", bad.to_str().unwrap(), "--k", "1", "--t", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("hermitian"), "diagnostic: {err}");

    // empty sweep list
    let form = form_path("i21_gauss.json");
    let out = run(&[
        "sweep",
        "--form",
        form.to_str().unwrap(),
        "--k",
        "1",
        "--t",
        "",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // descending bounds
    let out = run(&[
        "verify",
        "--form",
        form.to_str().unwrap(),
        "--k",
        "1",
        "--t",
        "10,5,20",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_code_3_on_budget() {
    let form = form_path("i21_gauss.json");
    let out = bin()
        .args([
            "count",
            "--form",
            form.to_str().unwrap(),
            "--k",
            "1",
            "--t",
            "100000",
            "--budget",
            "1000",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn exit_code_4_on_unstabilized_bad_prime() {
    let form = form_path("i21_gauss.json");
    // j_max = 1 cannot satisfy the bad-prime threshold at p = 2
    let out = run(&[
        "density",
        "--form",
        form.to_str().unwrap(),
        "--k",
        "1",
        "--p",
        "2",
        "--jmax",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn budget_env_override() {
    let form = form_path("i21_gauss.json");
    let out = bin()
        .env("HERMCOUNT_BUDGET", "1000")
        .args([
            "count",
            "--form",
            form.to_str().unwrap(),
            "--k",
            "1",
            "--t",
            "100000",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn shorthand_form_descriptor() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("short.json");
    std::fs::write(
        &path,
        r#"{"domain": {"kind": "real"}, "shorthand": "I_{2,1}"}"#,
    )
    .unwrap();
    let out = run(&["count", "--form", path.to_str().unwrap(), "--k", "1", "--t", "1"]);
    let v = stdout_json(&out);
    assert_eq!(v["total"], 2);
}
