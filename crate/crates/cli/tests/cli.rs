use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use specfam::linalg::{eigen_oracle, HermitianMatrix};
use specfam_cli::market::read_matrix_market;

fn specfam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_specfam"))
        .args(args)
        .output()
        .expect("spawn specfam")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn assert_all_pass(out: &Output) -> Value {
    let r = report(out);
    let failed: Vec<&Value> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] != Value::Bool(true))
        .collect();
    assert!(failed.is_empty(), "{failed:#?}");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(r["passed"], Value::Bool(true));
    r
}

#[test]
fn every_record_carries_an_anchor() {
    let out = specfam(&["verify", "--kind", "random", "--dim", "6", "--seed", "3"]);
    let r = assert_all_pass(&out);
    let checks = r["checks"].as_array().unwrap();
    assert!(checks.len() > 30);
    for c in checks {
        let anchor = c["anchor"].as_str().unwrap();
        assert!(!anchor.is_empty(), "{c}");
        for key in ["name", "residual", "tolerance"] {
            assert!(c.get(key).is_some(), "{key} missing in {c}");
        }
    }
    for key in [
        "tool",
        "version",
        "input",
        "family",
        "split",
        "quadrature",
        "profile",
    ] {
        assert!(r.get(key).is_some(), "{key} missing");
    }
    assert!(r["profile"]["label"]
        .as_str()
        .unwrap()
        .contains("desk-scale emulation"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = [
        "verify", "--kind", "random", "--dim", "10", "--seed", "42", "--mode", "complex",
    ];
    let a = specfam(&args);
    let b = specfam(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let other = specfam(&[
        "verify", "--kind", "random", "--dim", "10", "--seed", "43", "--mode", "complex",
    ]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn zero_operator_passes_trivially() {
    let r = assert_all_pass(&specfam(&[
        "verify",
        "--kind",
        "diagonal",
        "--spectrum",
        "0",
    ]));
    assert_eq!(r["family"]["jump_points"], serde_json::json!([0.0]));
}

#[test]
fn laplacian_quadrature_table_respects_the_first_bound() {
    let r = assert_all_pass(&specfam(&[
        "reconstruct",
        "--kind",
        "laplacian1d",
        "--dim",
        "32",
    ]));
    let q = &r["quadrature"];
    let norm_sqr = q["norm_sqr"].as_f64().unwrap();
    let table = q["table"].as_array().unwrap();
    assert_eq!(table.len(), 64);
    for row in table {
        let k = row["k"].as_f64().unwrap();
        assert!(
            row["err1"].as_f64().unwrap() * k <= norm_sqr + 1e-9,
            "{row}"
        );
    }
}

#[test]
fn verbs_select_their_sections() {
    let r = assert_all_pass(&specfam(&[
        "split",
        "--kind",
        "diagonal",
        "--spectrum",
        "-2,0,3",
    ]));
    assert!(r.get("split").is_some() && r.get("quadrature").is_none());
    assert_eq!(r["split"]["rank_e"], 2);
    assert_eq!(r["split"]["spectrum_minus"]["min"], -2.0);
    assert_eq!(r["split"]["spectrum_plus"]["max"], 3.0);

    let r = assert_all_pass(&specfam(&[
        "analyze",
        "--kind",
        "oscillator",
        "--dim",
        "12",
    ]));
    assert!(r.get("family").is_some() && r.get("split").is_none());
    let ranks: u64 = r["family"]["increment_ranks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .sum();
    assert_eq!(ranks, 12);
}

#[test]
fn matrix_market_inputs_verify() {
    for (file, mode) in [
        ("tridiagonal.mtx", "real"),
        ("hermitian.mtx", "complex"),
        ("nearly_symmetric.mtx", "real"),
    ] {
        let path = data(file);
        let r = assert_all_pass(&specfam(&[
            "verify",
            "--input",
            path.to_str().unwrap(),
            "--mode",
            mode,
        ]));
        assert_eq!(r["input"]["kind"], "file");
        assert!(r["loaded"]["symmetrization_defect"].as_f64().is_some());
    }
    let path = data("nearly_symmetric.mtx");
    let r = report(&specfam(&["analyze", "--input", path.to_str().unwrap()]));
    let defect = r["loaded"]["symmetrization_defect"].as_f64().unwrap();
    assert!(defect > 0.0 && defect < 1e-6, "{defect}");
}

#[test]
fn tridiagonal_file_has_the_closed_form_spectrum() {
    let m = read_matrix_market(&data("tridiagonal.mtx")).unwrap();
    let a: HermitianMatrix<f64> = m.to_hermitian().unwrap();
    let got = eigen_oracle(&a).unwrap().eigenvalues;
    for (j, g) in got.iter().enumerate() {
        let theta = (j + 1) as f64 * std::f64::consts::PI / 5.0;
        approx::assert_abs_diff_eq!(*g, 2.0 - 2.0 * theta.cos(), epsilon = 1e-12);
    }
}

#[test]
fn gen_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    for mode in ["real", "complex"] {
        let path = dir.path().join(format!("random_{mode}.mtx"));
        let p = path.to_str().unwrap();
        let out = specfam(&[
            "gen", "--kind", "random", "--dim", "7", "--seed", "9", "--mode", mode, "--out", p,
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
        let stdout = specfam(&[
            "gen", "--kind", "random", "--dim", "7", "--seed", "9", "--mode", mode,
        ]);
        assert_eq!(std::fs::read(&path).unwrap(), stdout.stdout);

        let direct = report(&specfam(&[
            "analyze", "--kind", "random", "--dim", "7", "--seed", "9", "--mode", mode,
        ]));
        let loaded = assert_all_pass(&specfam(&["analyze", "--input", p, "--mode", mode]));
        assert_eq!(
            direct["family"]["jump_points"],
            loaded["family"]["jump_points"]
        );
    }
}

#[test]
fn out_writes_the_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = specfam(&[
        "verify",
        "--kind",
        "laplacian1d",
        "--dim",
        "8",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["passed"], Value::Bool(true));
    assert_eq!(
        std::fs::read_dir(dir.path()).unwrap().count(),
        1,
        "no temporary files left"
    );
}

#[test]
fn failing_checks_exit_one_and_come_first() {
    let out = specfam(&[
        "verify",
        "--kind",
        "random",
        "--dim",
        "5",
        "--tol-scale",
        "1e-300",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["passed"], Value::Bool(false));
    let passed: Vec<bool> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["passed"].as_bool().unwrap())
        .collect();
    assert!(!passed[0]);
    assert!(
        passed.windows(2).all(|w| w[0] <= w[1]),
        "failures must precede passes"
    );
}

#[test]
fn usage_and_input_errors_exit_two() {
    let missing = data("does_not_exist.mtx");
    let asymmetric = data("asymmetric.mtx");
    let hermitian = data("hermitian.mtx");
    for args in [
        vec!["verify", "--kind", "nonsense"],
        vec!["frobnicate"],
        vec!["verify", "--dim", "0"],
        vec!["verify", "--kind", "diagonal"],
        vec![
            "verify",
            "--kind",
            "diagonal",
            "--spectrum",
            "1,2",
            "--dim",
            "3",
        ],
        vec!["verify", "--tol-scale", "-1"],
        vec!["verify", "--input", missing.to_str().unwrap()],
        vec!["verify", "--input", asymmetric.to_str().unwrap()],
        vec![
            "verify",
            "--input",
            hermitian.to_str().unwrap(),
            "--mode",
            "real",
        ],
    ] {
        let out = specfam(&args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}
