use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_simulroots"))
}

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name)
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn quadratic() -> PathBuf {
    scratch(
        "quadratic.json",
        r#"{"degree": 2, "coeffs": [[-1, 0], [0, 0]]}"#,
    )
}

fn simulroots(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn float(v: &Value) -> f64 {
    v.as_str().expect("floats are strings").parse().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_quadratic_converges() {
    let f = quadratic();
    let z = scratch("z_asym.json", "[[1.2, 0], [-0.8, 0]]");
    for (method, max_steps) in [("ehrlich", 6), ("nourein", 5)] {
        let out = simulroots(&["solve", s(&f), s(&z), "--method", method, "--oracle"]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let trace = json(&out);
        assert_eq!(trace["status"], "converged");
        let rows = trace["rows"].as_array().unwrap();
        assert!(
            rows.len() - 1 <= max_steps,
            "{method}: {} steps",
            rows.len() - 1
        );
        assert!(float(&rows.last().unwrap()["true_error"]) < 1e-12);
    }
}

#[test]
fn solve_output_is_deterministic() {
    let file = corpus("09_tenth_roots_of_unity.json");
    let args = ["solve", s(&file), "--point", "mid", "--method", "nourein"];
    let a = simulroots(&args);
    let b = simulroots(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let csv = simulroots(&[&args[..], &["--format", "csv"]].concat());
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("k,w_norm,e,"));
    assert_eq!(
        text.lines().count(),
        json(&a)["rows"].as_array().unwrap().len() + 1
    );
}

#[test]
fn solve_exit_codes() {
    let f = quadratic();
    let coincident = scratch("z_coincident.json", "[[0.5, 0], [0.5, 0]]");
    let out = simulroots(&["solve", s(&f), s(&coincident)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("distinct"));

    let far = scratch("z_far.json", "[[2, 0], [0, 0]]");
    let out = simulroots(&["solve", s(&f), s(&far), "--require-certificate"]);
    assert_eq!(code(&out), 3);

    let out = simulroots(&[
        "solve",
        s(&f),
        s(&far),
        "--max-iters",
        "1",
        "--tol",
        "1e-15",
    ]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["status"], "budget-exhausted");

    let bad = scratch("bad_poly.json", r#"{"degree": 3, "coeffs": [[1, 0]]}"#);
    assert_eq!(code(&simulroots(&["solve", s(&bad)])), 2);
    assert_eq!(code(&simulroots(&["solve", s(&f), "--p", "0.5"])), 2);
    assert_eq!(code(&simulroots(&["solve", "/nonexistent.json"])), 2);
}

#[test]
fn certify_root_vector_for_every_method() {
    let f = corpus("03_wilkinson4.json");
    let roots = scratch("w4_roots.json", "[[1, 0], [2, 0], [3, 0], [4, 0]]");
    for method in ["weierstrass", "ehrlich", "ehrlich-derivative", "nourein"] {
        let out = simulroots(&["certify", s(&f), s(&roots), "--method", method]);
        assert_eq!(code(&out), 0, "{method}");
        let cert = json(&out);
        assert_eq!(cert["satisfied"], true);
        assert_eq!(float(&cert["e0"]), 0.0);
    }
}

#[test]
fn certify_rejects_far_point() {
    let f = quadratic();
    let z = scratch("z_two_zero.json", "[[2, 0], [0, 0]]");
    let out = simulroots(&["certify", s(&f), s(&z), "--p", "inf"]);
    assert_eq!(code(&out), 1);
    let cert = json(&out);
    assert_eq!(cert["satisfied"], false);
    assert!((float(&cert["e0"]) - 0.75).abs() < 1e-15);
}

#[test]
fn certify_disks() {
    let out = simulroots(&[
        "certify",
        s(&corpus("03_wilkinson4.json")),
        "--point",
        "near",
        "--disks",
    ]);
    assert_eq!(code(&out), 0);
    let disks = json(&out)["disks"].as_array().unwrap().clone();
    assert_eq!(disks.len(), 4);
    let parsed: Vec<(f64, f64, f64)> = disks
        .iter()
        .map(|d| {
            (
                float(&d["center"][0]),
                float(&d["center"][1]),
                float(&d["radius"]),
            )
        })
        .collect();
    for (i, a) in parsed.iter().enumerate() {
        for b in &parsed[i + 1..] {
            assert!((a.0 - b.0).hypot(a.1 - b.1) > a.2 + b.2);
        }
    }

    let out = simulroots(&[
        "certify",
        s(&corpus("12_cluster.json")),
        "--point",
        "far",
        "--disks",
    ]);
    assert_eq!(code(&out), 1);
    assert!(json(&out)["disks_error"].is_string());
}

#[test]
fn compare_spot_check() {
    let out = simulroots(&["compare", "--n-range", "10..10", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let row = &json(&out)[0];
    assert!((float(&row["ehrlich_corollary"]) - 1.0 / 16.8).abs() < 1e-17);
    assert!((float(&row["nourein_corollary"]) - 1.0 / 16.8).abs() < 1e-17);

    let out = simulroots(&["compare"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 29);
    assert!(text.starts_with("n,ehrlich_corollary,"));

    assert_eq!(code(&simulroots(&["compare", "--n-range", "1..5"])), 2);
    assert_eq!(code(&simulroots(&["compare", "--n-range", "3..20000"])), 2);
    assert_eq!(code(&simulroots(&["compare", "--n-range", "abc"])), 2);
}

#[test]
fn constants() {
    let out = simulroots(&["constants"]);
    assert_eq!(code(&out), 0);
    let c = json(&out);
    assert!(c["EhrlichL1_R"].as_str().unwrap().starts_with("0.2922"));
    assert!(c["NoureinL1_R"].as_str().unwrap().starts_with("0.2825"));
    assert_eq!(c["ehrlich_inf_peak"]["n"], 10);
    assert_eq!(c["nourein_inf_peak"]["n"], 19);
    let b = c["B_of_A"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["a"] == "2.000000000" && s["p"] == "inf")
        .expect("B(2, inf) sample");
    assert!(b["b"].as_str().unwrap().starts_with("2.679570"));
}
