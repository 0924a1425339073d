//! Command-line behavior: flags, formats, error exits, determinism.

use std::process::Command;

fn run(args: &[&str]) -> (String, String, Option<i32>) {
    let output = Command::new(env!("CARGO_BIN_EXE_steersd"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8_lossy(&output.stdout).into_owned(),
        String::from_utf8_lossy(&output.stderr).into_owned(),
        output.status.code(),
    )
}

#[test]
fn bounds_single_setting_emits_one_row() {
    let (stdout, _, code) = run(&["bounds", "--settings", "2"]);
    assert_eq!(code, Some(0));
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("n,p_exact,p_oracle,eta_star"));
}

#[test]
fn bounds_rejects_unsupported_setting() {
    let (_, stderr, code) = run(&["bounds", "--settings", "7"]);
    assert_ne!(code, Some(0));
    assert!(stderr.contains("unsupported setting count"));
}

#[test]
fn werner_sweep_grid_is_inclusive() {
    let (stdout, _, code) = run(&["werner-sweep", "--eta", "0:1:0.05", "--settings", "10"]);
    assert_eq!(code, Some(0));
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 22, "header plus 21 rows");
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        let eta: f64 = fields[0].parse().unwrap();
        let p: f64 = fields[2].parse().unwrap();
        assert!((p - (0.5 + eta / 2.0)).abs() < 1e-8);
    }
}

#[test]
fn werner_sweep_classifies_the_regimes() {
    let (stdout, _, _) = run(&["werner-sweep", "--eta", "0.45", "--settings", "10"]);
    let row = stdout.lines().nth(1).unwrap();
    assert!(row.ends_with("true,false,false,true"));

    let (stdout, _, _) = run(&["werner-sweep", "--eta", "0.6", "--settings", "10"]);
    let row = stdout.lines().nth(1).unwrap();
    assert!(row.ends_with("true,true,false,true"));
}

#[test]
fn werner_sweep_appends_monte_carlo_columns() {
    let (stdout, _, code) = run(&[
        "werner-sweep",
        "--eta",
        "0.8",
        "--settings",
        "2",
        "--pairs",
        "10000",
        "--seed",
        "3",
    ]);
    assert_eq!(code, Some(0));
    let lines: Vec<&str> = stdout.lines().collect();
    assert!(lines[0].ends_with("p_hat,std_error"));
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields.len(), 10);
    let p_hat: f64 = fields[8].parse().unwrap();
    assert!((p_hat - 0.9).abs() < 0.02);
}

#[test]
fn malformed_grids_are_rejected() {
    for bad in ["0.2:0.1:0.05", "0:1:-0.1", "0:1", "abc"] {
        let (_, stderr, code) = run(&["werner-sweep", "--eta", bad, "--settings", "2"]);
        assert_ne!(code, Some(0), "grid '{bad}' accepted");
        assert!(!stderr.is_empty());
    }
}

#[test]
fn bell_diagonal_rejects_points_outside_the_triangle() {
    let (_, stderr, code) = run(&["bell-diagonal", "--tx", "0.99", "--tz", "0.5"]);
    assert_ne!(code, Some(0));
    assert!(stderr.contains("positivity"));
}

#[test]
fn bell_diagonal_reports_steerability() {
    let (stdout, _, code) = run(&["bell-diagonal", "--tx", "0.9", "--tz", "-0.9"]);
    assert_eq!(code, Some(0));
    let row = stdout.lines().nth(1).unwrap();
    assert!(row.starts_with("9.00000000e-1,-9.00000000e-1,9.50000000e-1"));
    assert!(row.ends_with("true"));
}

#[test]
fn chsh_endpoints() {
    let (stdout, _, _) = run(&["chsh", "--eta", "0:1:1"]);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("0.00000000e0,5.00000000e-1,0.00000000e0"));
    let last: Vec<&str> = lines[2].split(',').collect();
    let s: f64 = last[2].parse().unwrap();
    assert!((s - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-8);
}

#[test]
fn montecarlo_is_byte_deterministic() {
    let args = [
        "montecarlo",
        "--eta",
        "0:0.5:0.25",
        "--settings",
        "4",
        "--pairs",
        "20000",
        "--seed",
        "11",
    ];
    let (first, _, code) = run(&args);
    assert_eq!(code, Some(0));
    let (second, _, _) = run(&args);
    assert_eq!(first, second);
    assert_eq!(first.lines().count(), 4);
    assert!(first.starts_with("eta,n,total_pairs,seed,p_hat,std_error"));
}

#[test]
fn json_format_mirrors_csv_columns() {
    let (stdout, _, code) = run(&[
        "bounds",
        "--settings",
        "2",
        "--format",
        "json",
        "--grid",
        "2000",
    ]);
    assert_eq!(code, Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let rows = parsed.as_array().unwrap();
    assert_eq!(rows.len(), 1);
    for key in ["n", "p_exact", "p_oracle", "eta_star", "strategy", "probe_x", "probe_y", "probe_z"] {
        assert!(!rows[0][key].is_null(), "missing {key}");
    }
    assert!((rows[0]["p_exact"].as_f64().unwrap() - 0.8535533905932737).abs() < 1e-12);
}

#[test]
fn fit_eta_roundtrips_a_serialized_werner_state() {
    let rho = steersd::werner_state(0.7).unwrap();
    let json = serde_json::to_string(rho.matrix()).unwrap();
    let dir = std::env::temp_dir().join("steersd-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("werner07.json");
    std::fs::write(&path, json).unwrap();

    let (stdout, _, code) = run(&["fit-eta", "--input", path.to_str().unwrap()]);
    assert_eq!(code, Some(0));
    let fields: Vec<&str> = stdout.lines().nth(1).unwrap().split(',').collect();
    let eta: f64 = fields[0].parse().unwrap();
    let fidelity: f64 = fields[1].parse().unwrap();
    assert!((eta - 0.7).abs() < 1e-6);
    assert!(fidelity > 1.0 - 1e-8);
}

#[test]
fn fit_eta_rejects_invalid_density_matrices() {
    let dir = std::env::temp_dir().join("steersd-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("invalid.json");
    // trace 2, not a state
    std::fs::write(
        &path,
        r#"{"rows":2,"cols":2,"entries":[[1.0,0.0],[0.0,0.0],[0.0,0.0],[1.0,0.0]]}"#,
    )
    .unwrap();
    let (_, stderr, code) = run(&["fit-eta", "--input", path.to_str().unwrap()]);
    assert_ne!(code, Some(0));
    assert!(!stderr.is_empty());
}

#[test]
fn verify_waveplates_lists_each_gate() {
    let (stdout, _, code) = run(&["verify", "--waveplates", "10"]);
    assert_eq!(code, Some(0));
    let gate_lines = stdout.lines().filter(|l| l.contains("gate g")).count();
    assert_eq!(gate_lines, 4);
}

#[test]
fn verify_settings_restricts_the_groups() {
    let (stdout, _, code) = run(&["verify", "--settings", "6"]);
    assert_eq!(code, Some(0));
    assert!(stdout.contains("strategy table(n=6, 12 rows)"));
    assert!(!stdout.contains("n=2"));
}
