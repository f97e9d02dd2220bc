//! End-to-end checks of the `qoc` binary: exit codes, output schemas,
//! golden headers, and byte-level reproducibility.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn qoc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qoc"))
}

fn spec(name: &str) -> PathBuf {
    let mut path = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    path.pop();
    path.pop();
    path.push("specs");
    path.push(name);
    path
}

fn run(args: &[&str]) -> Output {
    qoc().args(args).output().expect("spawn qoc")
}

fn stdout_of(output: &Output) -> String {
    assert!(
        output.status.success(),
        "qoc failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn arg(path: &Path) -> String {
    path.to_str().unwrap().to_string()
}

#[test]
fn modes_subcommand_matches_reference_root() {
    let out = run(&[
        "modes",
        "--spec",
        &arg(&spec("pair.json")),
        "--xi",
        "0",
        "--omega-c-over",
        "10",
        "--n-max",
        "5",
    ]);
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,omega_rad_s,k_per_m,refl_abs,residual,error"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6);
    // first root at ω0 ≈ 2.2845 v0/d; pair.json has d = 0.02 m
    let first: Vec<&str> = rows[0].split(',').collect();
    let omega: f64 = first[1].parse().unwrap();
    let unit = 1.0 / (4.57e-7f64 * 1.46e-10).sqrt() / 0.02;
    assert!(
        (omega / unit - 2.2845).abs() < 1e-3,
        "ω0 = {omega} ({} v0/d)",
        omega / unit
    );
}

#[test]
fn coupling_subcommand_reports_headline_value() {
    let out = run(&[
        "coupling",
        "--spec",
        &arg(&spec("fig9.json")),
        "--n",
        "1",
        "--m",
        "2",
    ]);
    let text = stdout_of(&out);
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    let normalized = json["normalized_coupling"].as_f64().unwrap().abs();
    assert!(
        (5e-6..2e-5).contains(&normalized),
        "normalized coupling {normalized:e}"
    );
    assert_eq!(json["schema"], 1);
    assert!(json["x_star"].as_f64().unwrap() > 1.0);
    // the reference point sits just past the adiabaticity threshold
    // (Ω2/ω1 ≈ 0.104), so exactly that warning is expected
    let warnings = json["warnings"].as_array().unwrap();
    assert_eq!(warnings.len(), 1);
    assert!(warnings[0].as_str().unwrap().contains("not slow"));

    // the numeric field-integral variant stays close to the default
    let numeric = run(&[
        "coupling",
        "--spec",
        &arg(&spec("fig9.json")),
        "--n",
        "1",
        "--m",
        "2",
        "--g-variant",
        "biot-savart",
    ]);
    let numeric_json: serde_json::Value = serde_json::from_str(&stdout_of(&numeric)).unwrap();
    let g_numeric = numeric_json["normalized_coupling"].as_f64().unwrap().abs();
    assert!((g_numeric / normalized - 1.0).abs() < 0.05, "{g_numeric:e} vs {normalized:e}");
}

#[test]
fn validity_subcommand_coherent_state() {
    let out = run(&[
        "validity",
        "--spec",
        &arg(&spec("fig9.json")),
        "--n",
        "9",
        "--m",
        "2",
        "--state",
        "coherent",
        "--beta",
        "2",
    ]);
    let json: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(json["quadrature_max_mean_abs"].as_f64().unwrap(), 4.0);
    assert_eq!(json["quadrature_fluctuation"].as_f64().unwrap(), 1.0);
    assert!(json["pass"].as_bool().unwrap()); // 2|β|+1 = 5 well under X* ≈ 34
    let x_star = json["x_star"].as_f64().unwrap();
    let margin = json["margin"].as_f64().unwrap();
    assert!((margin - (x_star - 5.0)).abs() < 1e-9);
    // coherent ceiling (X*-1)²/4
    let ceiling = json["max_mean_photons"].as_f64().unwrap();
    assert!((ceiling - (x_star - 1.0) * (x_star - 1.0) / 4.0).abs() < 1e-9);
}

#[test]
fn validity_subcommand_reports_thermal_bounds() {
    let out = run(&[
        "validity",
        "--spec",
        &arg(&spec("fig9.json")),
        "--n",
        "9",
        "--m",
        "2",
        "--state",
        "thermal",
        "--temperature",
        "0.02",
    ]);
    let json: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert!(json["pass"].is_boolean());
    assert!(json["margin"].is_number());
    assert!(json["x_star"].as_f64().unwrap() > 1.0);
    assert!(json["max_mean_photons"].as_f64().unwrap() > 100.0);
    assert!(json["max_temperature_k"].as_f64().unwrap() > 0.0);
}

#[test]
fn baseline_subcommand_emits_reference_table() {
    let out = run(&["baseline"]);
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "label,curvature_rad_s_m2,curvature_2pi_khz_nm2,g_over_omega,error"
    );
    let rows: Vec<Vec<String>> = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    assert_eq!(rows.len(), 2);
    let membrane_g: f64 = rows[0][3].parse().unwrap();
    let tilted_g: f64 = rows[1][3].parse().unwrap();
    assert!((membrane_g - 9.4e-13).abs() < 0.05e-13);
    assert!((tilted_g - 5.3e-10).abs() < 0.05e-10);

    // same table from the shipped spec file
    let from_spec = run(&["baseline", "--spec", &arg(&spec("baseline.json"))]);
    assert_eq!(stdout_of(&from_spec), text);
}

#[test]
fn sweep_is_byte_reproducible_and_respects_out_flag() {
    let args = [
        "sweep",
        "--spec",
        &arg(&spec("fig9.json")),
        "--target",
        "fig10",
        "--points",
        "11",
    ];
    let first = stdout_of(&run(&args));
    let second = stdout_of(&run(&args));
    assert_eq!(first, second, "sweep output must be byte-identical");
    assert!(first.starts_with(
        "bias_over_phi0,n,m,omega_n0_rad_s,omega_m_rad_s,g_rad_s,g_abs_over_omega_m,error"
    ));
    // %.12e cells
    assert!(first.contains("e+") || first.contains("e-"));

    // --jobs must not change bytes
    let mut with_jobs: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    with_jobs.extend(["--jobs".to_string(), "2".to_string()]);
    let jobs_out = qoc().args(&with_jobs).output().unwrap();
    assert_eq!(String::from_utf8(jobs_out.stdout).unwrap(), first);

    // --out writes the same bytes to a file
    let mut path = std::env::temp_dir();
    path.push(format!("qoc-sweep-test-{}.csv", std::process::id()));
    let mut with_out: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    with_out.extend(["--out".to_string(), path.to_str().unwrap().to_string()]);
    let out = qoc().args(&with_out).output().unwrap();
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), first);
    std::fs::remove_file(&path).ok();
}

#[test]
fn golden_headers_for_figure_targets() {
    let cases = [
        (
            "fig3_4",
            "pair.json",
            "omega_c_over_v0_d,xi_over_d,n,omega_rad_s,omega_over_v0_d,error",
        ),
        (
            "fig5",
            "pair.json",
            "omega_c_over_v0_d,xi_over_d,n,y_over_d,u,error",
        ),
        (
            "fig7",
            "tunable.json",
            "lj0_over_ell_d,cj_over_c_d,phi_over_phi0,n,omega_rad_s,omega_approx_rad_s,eta,error",
        ),
        (
            "fig8",
            "tunable.json",
            "phi_over_phi0,x_over_d,u,delta_d_m,virtual_end_m,error",
        ),
        (
            "fig11",
            "fig9.json",
            "cc_F,n,m,refl_abs,omega_n0_rad_s,g_abs_over_omega_m,error",
        ),
        ("fig12", "fig9.json", "bias_over_phi0,n,m,x_star,error"),
    ];
    for (target, spec_name, header) in cases {
        let out = run(&[
            "sweep",
            "--spec",
            &arg(&spec(spec_name)),
            "--target",
            target,
            "--points",
            "3",
        ]);
        let text = stdout_of(&out);
        assert_eq!(text.lines().next().unwrap(), header, "target {target}");
    }
}

#[test]
fn tunable_subcommand_flux_sweep() {
    let out = run(&[
        "tunable",
        "--spec",
        &arg(&spec("tunable.json")),
        "--phi-min",
        "0",
        "--phi-max",
        "0.4",
        "--points",
        "5",
        "--n-max",
        "2",
    ]);
    let text = stdout_of(&out);
    assert!(text.starts_with(
        "phi_over_phi0,n,omega_rad_s,omega_approx_rad_s,eta,delta_d_m,error"
    ));
    assert_eq!(text.lines().count(), 1 + 5 * 2);

    // conflicting flag combinations are usage errors
    let conflict = run(&[
        "tunable",
        "--spec",
        &arg(&spec("tunable.json")),
        "--phi",
        "0.1",
        "--phi-min",
        "0",
    ]);
    assert_eq!(conflict.status.code(), Some(2));
}

#[test]
fn analog_spectrum_reports_epsilon() {
    let out = run(&[
        "analog-spectrum",
        "--spec",
        &arg(&spec("fig9.json")),
        "--dphi",
        "0.005",
        "--n-max",
        "3",
    ]);
    let text = stdout_of(&out);
    assert!(text.starts_with("n,omega_rad_s,k_per_m,refl_abs,residual,epsilon,error"));
    assert_eq!(text.lines().count(), 1 + 4);
}

#[test]
fn design_subcommand_finds_binding_bias_bound() {
    let out = run(&[
        "design",
        "--spec",
        &arg(&spec("fig9.json")),
        "--n",
        "1",
        "--m",
        "2",
        "--free",
        "bias",
    ]);
    let json: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let argmax = json["argmax"][0]["value"].as_f64().unwrap();
    assert!((argmax - 0.45).abs() < 1e-6, "argmax bias {argmax}");
    assert!(json["binding_constraint"]
        .as_str()
        .unwrap()
        .contains("upper bound"));
}

#[test]
fn exit_codes_distinguish_physics_from_usage() {
    // physics error: half-quantum bias flux → 1
    let mut path = std::env::temp_dir();
    path.push(format!("qoc-halfflux-{}.json", std::process::id()));
    let text = std::fs::read_to_string(spec("fig9.json")).unwrap();
    std::fs::write(&path, text.replace("0.4", "0.5")).unwrap();
    let out = run(&["coupling", "--spec", &arg(&path), "--n", "1", "--m", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("half-integer flux"), "stderr: {stderr}");
    std::fs::remove_file(&path).ok();

    // usage error: missing spec file → 2
    let out = run(&["coupling", "--spec", "/nonexistent.json", "--n", "1", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));

    // usage error: malformed JSON → 2
    let mut path = std::env::temp_dir();
    path.push(format!("qoc-badjson-{}.json", std::process::id()));
    std::fs::write(&path, "{ not json").unwrap();
    let out = run(&["coupling", "--spec", &arg(&path), "--n", "1", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_file(&path).ok();

    // usage error: unknown flag → 2 (from the parser itself)
    let out = run(&["coupling", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));

    // usage error: thermal state without temperature → 2
    let out = run(&[
        "validity",
        "--spec",
        &arg(&spec("fig9.json")),
        "--n",
        "1",
        "--m",
        "2",
        "--state",
        "thermal",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // physics error: odd drive mode rejected by the parity gate → 1
    let out = run(&[
        "coupling",
        "--spec",
        &arg(&spec("fig9.json")),
        "--n",
        "1",
        "--m",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
}
