use std::path::Path;
use std::process::{Command, Output};

use darboux::cli::{EXIT_FAILED, EXIT_OK, EXIT_USAGE};
use tempfile::tempdir;

fn darboux(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_darboux"))
        .args(args)
        .env_remove("DARBOUX_CONFIG")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn no_arguments_prints_usage() {
    let out = darboux(&[]);
    assert_eq!(code(&out), EXIT_USAGE);
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn unknown_subcommand_and_flag_are_usage_errors() {
    assert_eq!(code(&darboux(&["frobnicate"])), EXIT_USAGE);
    assert_eq!(code(&darboux(&["normal-form", "--bogus"])), EXIT_USAGE);
}

#[test]
fn verify_darboux_reports_json() {
    let out = darboux(&["verify-darboux", "--nu", "0.5", "--rho", "0.3", "--samples", "100", "--seed", "7"]);
    assert_eq!(code(&out), EXIT_OK);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["samples"], 100);
    assert!(v["max_residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn impossible_tolerance_is_a_failed_check() {
    let out = darboux(&["verify-darboux", "--seed", "1", "--samples", "5", "--tol", "0"]);
    assert_eq!(code(&out), EXIT_FAILED);
}

#[test]
fn ci_mode_requires_a_seed() {
    assert_eq!(code(&darboux(&["--ci", "verify-darboux"])), EXIT_USAGE);
    assert_eq!(code(&darboux(&["--ci", "truncation-study", "--K", "1"])), EXIT_USAGE);
    assert_eq!(code(&darboux(&["--ci", "closeness-scaling"])), EXIT_USAGE);
    assert_eq!(code(&darboux(&["--ci", "verify-darboux", "--seed", "3", "--samples", "5"])), EXIT_OK);
}

#[test]
fn invalid_parameters_are_usage_errors() {
    assert_eq!(code(&darboux(&["truncation-study", "--rho-grid", "0.1,0.2,0.05"])), EXIT_USAGE);
    assert_eq!(code(&darboux(&["truncation-study", "--rho-grid", "0.2,0.1"])), EXIT_USAGE);
    assert_eq!(code(&darboux(&["truncation-study", "--K", "9"])), EXIT_USAGE);
    assert_eq!(code(&darboux(&["normal-form", "--sites", "2"])), EXIT_USAGE);
    assert_eq!(code(&darboux(&["simulate", "--model", "al", "--gamma", "1"])), EXIT_USAGE);
    assert_eq!(code(&darboux(&["--jobs", "0", "error-budget"])), EXIT_USAGE);
}

#[test]
fn empty_k_range_gives_header_only_csv() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("empty.toml");
    std::fs::write(&cfg, "k_values = []\n").unwrap();
    let out = darboux(&["truncation-study", "--config", p(&cfg)]);
    assert_eq!(code(&out), EXIT_OK);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "K,min_degree,slope,capped_L\n");
}

#[test]
fn reports_are_byte_identical_across_runs_and_thread_counts() {
    let dir = tempdir().unwrap();
    let mut outputs = Vec::new();
    for (i, jobs) in ["1", "4"].iter().enumerate() {
        let csv = dir.path().join(format!("t{i}.csv"));
        let json = dir.path().join(format!("t{i}.json"));
        let out = darboux(&[
            "--jobs", jobs, "truncation-study", "--seed", "5", "--K", "1,2,3", "--no-cap",
            "--csv", p(&csv), "--json", p(&json),
        ]);
        assert_eq!(code(&out), EXIT_OK);
        outputs.push((std::fs::read(&csv).unwrap(), std::fs::read(&json).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    let csv = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert!(csv.starts_with("K,min_degree,slope,capped_L\n1,6,"));
}

#[test]
fn dumped_config_reproduces_the_report() {
    let dir = tempdir().unwrap();
    let (dump, first, second) = (dir.path().join("cfg.json"), dir.path().join("a.json"), dir.path().join("b.json"));
    let out = darboux(&[
        "closeness-scaling", "--seed", "11", "--pair", "al-z0", "--nu", "0.25",
        "--dump-config", p(&dump), "--json", p(&first),
    ]);
    assert_eq!(code(&out), EXIT_OK);
    let out = darboux(&["closeness-scaling", "--pair", "al-z0", "--config", p(&dump), "--json", p(&second)]);
    assert_eq!(code(&out), EXIT_OK);
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(&first).unwrap()).unwrap();
    assert_eq!(report["config"]["nu"], 0.25);
    assert_eq!(report["pass"], true);
}

#[test]
fn flags_override_file_which_overrides_defaults() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("study.toml");
    std::fs::write(&cfg, "nu = 0.25\nseed = 3\nk_values = [1]\ncap_l = 2\n").unwrap();
    let dump = dir.path().join("eff.json");
    let run = |extra: &[&str], env: Option<&Path>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_darboux"));
        cmd.args(["truncation-study", "--dump-config", p(&dump)]).args(extra).env_remove("DARBOUX_CONFIG");
        if let Some(e) = env {
            cmd.env("DARBOUX_CONFIG", e);
        }
        let out = cmd.output().unwrap();
        assert_eq!(code(&out), EXIT_OK, "{}", String::from_utf8_lossy(&out.stderr));
        serde_json::from_slice::<serde_json::Value>(&std::fs::read(&dump).unwrap()).unwrap()
    };
    let eff = run(&["--config", p(&cfg), "--seed", "9"], None);
    assert_eq!(eff["nu"], 0.25);
    assert_eq!(eff["seed"], 9);
    assert_eq!(eff["cap_l"], 2);
    assert_eq!(eff["gamma"], 1.0);
    // the environment variable names the default file
    let eff = run(&[], Some(&cfg));
    assert_eq!(eff["seed"], 3);
}

#[test]
fn simulate_writes_the_documented_columns() {
    let dir = tempdir().unwrap();
    let csv = dir.path().join("traj.csv");
    let out = darboux(&[
        "simulate", "--model", "salerno", "--sites", "3", "--rho", "0.1", "--seed", "2", "--t-end", "5",
        "--out", p(&csv),
    ]);
    assert_eq!(code(&out), EXIT_OK);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,x_0,x_1,x_2,y_0,y_1,y_2,H,P_or_norm");
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 101);
    assert_eq!(rows[0][0], 0.0);
    assert_eq!(rows[100][0], 5.0);
    let (h0, p0) = (rows[0][7], rows[0][8]);
    assert!(rows.iter().all(|r| (r[7] - h0).abs() < 1e-9 && (r[8] - p0).abs() < 1e-9));
}

#[test]
fn simulate_accepts_explicit_initial_data() {
    let out = darboux(&["simulate", "--model", "dnls", "--sites", "1", "--nu", "0", "--eps", "0", "--init", "0.2,0", "--t-end", "1"]);
    assert_eq!(code(&out), EXIT_OK);
    let text = String::from_utf8(out.stdout).unwrap();
    let first: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    // H = γ/8·A² and ½|z|² for the single dNLS site
    assert!((first[3] - 0.04f64.powi(2) / 8.0).abs() < 1e-15);
    assert!((first[4] - 0.02).abs() < 1e-15);
}

#[test]
fn compare_flows_needs_transport_across_bracket_types() {
    let args = ["compare-flows", "--model-a", "salerno", "--model-b", "z0", "--seed", "1"];
    assert_eq!(code(&darboux(&[&args[..], &["--transport", "none"]].concat())), EXIT_USAGE);
    let out = darboux(&args);
    assert_eq!(code(&out), EXIT_OK);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let e = v["exponent"].as_f64().unwrap();
    assert!((2.7..=3.3).contains(&e), "exponent {e}");
}

#[test]
fn error_budget_flags_gamma_star() {
    let out = darboux(&["error-budget", "--nu", "0.5", "--rho", "0.1", "--K", "3"]);
    assert_eq!(code(&out), EXIT_OK);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["below_gamma_star"], true);
    assert_eq!(v["lie_derivative_bounds"].as_array().unwrap().len(), 4);
    let out = darboux(&["error-budget", "--rho", "0.1", "--x-majorant", "10"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["convergence_warning"], true);
}

#[test]
fn normal_form_prints_formula_and_al_has_no_onsite_terms() {
    let out = darboux(&["normal-form", "--model", "al", "--formula"]);
    assert_eq!(code(&out), EXIT_OK);
    let f = String::from_utf8(out.stdout).unwrap();
    assert!(f.starts_with("sum_j [ "));
    assert!(!f.contains("gamma"));
    assert!(f.contains("1/4*nu*eps*x_{j}^3*x_{j+1}"));
}
