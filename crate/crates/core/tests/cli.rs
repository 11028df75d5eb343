use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fqsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fqsp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn approx_writes_even_order_result() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("approx.json");
    let out = fqsp(&[
        "approx", "--function", "exp", "--beta", "2", "--eps", "1e-3", "--method", "analytic", "-o",
        path_str(&out_path),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = read(&out_path);
    let q = v["q"].as_u64().unwrap();
    assert!(q > 0 && q % 2 == 0, "{v}");
    assert!(v["eps_measured"].as_f64().unwrap() < 1e-3);
}

#[test]
fn approx_rejects_eps_out_of_range() {
    let out = fqsp(&["approx", "--eps", "1.5"]);
    assert_eq!(code(&out), 1);
    assert!(!out.stderr.is_empty());
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    assert_eq!(code(&fqsp(&["approx"])), 1);
    assert_eq!(code(&fqsp(&["frobnicate"])), 1);
    assert_eq!(code(&fqsp(&["--help"])), 0);
}

#[test]
fn approx_ceiling_exits_two() {
    let out = fqsp(&[
        "approx", "--function", "exp", "--beta", "50", "--eps", "1e-9", "--method", "linear", "--q-max", "64",
    ]);
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn simulate_transverse_field_chain() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("sim.json");
    let out = fqsp(&[
        "simulate", "--hamiltonian", "tfim:4", "--function", "exp", "--beta", "2", "--eps", "1e-3", "-o",
        path_str(&out_path),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = read(&out_path);
    assert!(v["err_vs_target"].as_f64().unwrap() <= 1e-3);
    assert!(v["err_vs_series"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn simulate_scalar_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("sim.json");
    let out = fqsp(&[
        "simulate", "--hamiltonian", "diag:0", "--function", "exp", "--beta", "1", "--eps", "1e-3", "-o",
        path_str(&out_path),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = read(&out_path);
    let alpha = v["alpha"].as_f64().unwrap();
    let entry = &v["block"]["entries"][0][0];
    let (re, im) = (entry[0].as_f64().unwrap(), entry[1].as_f64().unwrap());
    let expected = alpha * (-1f64).exp();
    assert!(((re - expected).powi(2) + im * im).sqrt() <= 1e-3, "{re} {im} vs {expected}");
}

#[test]
fn simulate_unnormalized_operator_needs_remap() {
    let args = ["simulate", "--hamiltonian", "diag:0,3", "--function", "exp", "--beta", "1", "--eps", "1e-2"];
    let out = fqsp(&args);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("remap"));
    let mut with_remap = args.to_vec();
    with_remap.extend(["--remap", "auto"]);
    assert_eq!(code(&fqsp(&with_remap)), 0);
}

#[test]
fn simulate_from_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("h.json");
    // Pauli Y / 2
    std::fs::write(&m, r#"{"dim":2,"entries":[[[0,0],[0,-0.5]],[[0,0.5],[0,0]]]}"#).unwrap();
    let out = fqsp(&["simulate", "--matrix", path_str(&m), "--beta", "1", "--eps", "1e-2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::write(&m, r#"{"dim":2,"entries":[[[0,0],[1,0]],[[0,0],[0,0]]]}"#).unwrap();
    assert_eq!(code(&fqsp(&["simulate", "--matrix", path_str(&m), "--eps", "1e-2"])), 1);
}

#[test]
fn compare_table_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let betas = "1,2,3,4,5,6,7,8,9,10";
    for p in [&a, &b] {
        let out = fqsp(&["compare", "--betas", betas, "--eps", "1e-2", "-o", path_str(p)]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("beta,eps,q_lemma37,q_linear,q_analytic"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 10);
    for row in rows {
        for cell in row.split(',').skip(2) {
            let q: u64 = cell.parse().unwrap();
            assert!(q > 0 && q % 2 == 0, "{row}");
        }
    }
}

#[test]
fn compare_without_complete_rows_exits_two() {
    let out = fqsp(&["compare", "--betas", "30", "--eps", "1e-6", "--q-max", "16"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("beta,eps,q_lemma37,q_linear,q_analytic"));
}

#[test]
fn files_chain_through_complement_pulses_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name);
    let [approx, pair, pulses, report, roots] =
        ["a.json", "pair.json", "pulses.json", "report.json", "roots.csv"].map(|n| p(n).to_str().unwrap().to_string());
    let steps = [
        vec!["approx", "--beta", "2", "--eps", "1e-4", "-o", &approx],
        vec!["complement", "-i", &approx, "--roots", &roots, "-o", &pair],
        vec!["pulses", "-i", &pair, "-o", &pulses],
        vec!["verify", "--pulses", &pulses, "--series", &pair, "-o", &report],
    ];
    for args in &steps {
        let out = fqsp(args);
        assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let report = read(&p("report.json"));
    assert!(report["max_abs_error"].as_f64().unwrap() < 1e-8);
    let pulses = read(&p("pulses.json"));
    assert_eq!(pulses["q"], read(&p("a.json"))["q"]);
    assert!(std::fs::read_to_string(p("roots.csv")).unwrap().lines().count() > 1);

    // a tampered pulse fails verification with the numerical exit code
    let mut bad = pulses.clone();
    let phi = bad["xis"][1]["phi"].as_f64().unwrap();
    bad["xis"][1]["phi"] = Value::from(phi + 0.1);
    std::fs::write(p("bad.json"), bad.to_string()).unwrap();
    let out = fqsp(&["verify", "--pulses", path_str(&p("bad.json")), "--series", path_str(&p("pair.json"))]);
    assert_eq!(code(&out), 2);
}

#[test]
fn outputs_round_trip_and_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        let out = fqsp(&[
            "simulate", "--hamiltonian", "random_hermitian:4", "--seed", "7", "--eps", "1e-3", "-o", path_str(p),
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let parsed: fourier_qsp::qsim::BlockEncodingResult = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&parsed).unwrap().trim(), text.trim());
}
