use std::process::{Command, Output};

use serde_json::Value;

fn svdwbc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_svdwbc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn verify_defaults_pass() {
    let out = svdwbc(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["all_pass"], true);
    assert_eq!(report["config"]["M"], 4);
    let names: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    for n in ["rtt", "slavnov", "gaudin", "qism", "d-action", "efp"] {
        assert!(names.contains(&n), "{n} missing");
    }
}

#[test]
fn verify_unattainable_tolerance_fails_cleanly() {
    let out = svdwbc(&["verify", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["all_pass"], false);
    assert_eq!(report["first_failure"], "rtt");
}

#[test]
fn odd_lattice_is_input_error() {
    let out = svdwbc(&["verify", "--M", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("even"));
}

#[test]
fn inconsistent_sizes_and_bad_gamma_are_input_errors() {
    assert_eq!(svdwbc(&["solve-bae", "--M", "4", "--N", "3"]).status.code(), Some(2));
    assert_eq!(svdwbc(&["solve-bae", "--gamma", "2.0"]).status.code(), Some(2));
    assert_eq!(svdwbc(&["solve-bae", "--mu", "0.1,0.2,0.3", "--M", "4"]).status.code(), Some(2));
    assert_eq!(svdwbc(&["bogus"]).status.code(), Some(2));
}

#[test]
fn solve_bae_homogeneous_n4() {
    let out = svdwbc(&["solve-bae", "--N", "4", "--gamma", "0.6", "--mu", "homogeneous"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["M"], 8);
    let res = v["residuals"].as_array().unwrap();
    assert_eq!(res.len(), 4);
    assert!(res.iter().all(|r| r.as_f64().unwrap().abs() < 1e-12));
    assert_eq!(v["config"]["command"], "solve-bae");
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        &["solve-bae", "--N", "3", "--mu", "random", "--seed", "9"][..],
        &["verify", "--seed", "5"][..],
        &["efp-thermo", "--n", "4", "--samples", "20000", "--points", "64"][..],
    ] {
        let a = svdwbc(args);
        let b = svdwbc(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["efp-thermo", "--n", "2", "--points", "64", "--mu", "0.1,-0.1"];
    let one = svdwbc(&[&args[..], &["--threads", "1"]].concat());
    let four = svdwbc(&[&args[..], &["--threads", "4"]].concat());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn density_at_pi_over_three() {
    let out = svdwbc(&["density", "--gamma", "1.0471975512", "--points", "256"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rho0: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("# rho_tot(0) = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((rho0 - 1.5 / std::f64::consts::PI).abs() < 1e-6, "{rho0}");
    assert!(text.lines().any(|l| l.starts_with("# config = {")));
    assert!(text.contains("branch,x,rho_tot,rho_p,theta"));
}

#[test]
fn efp_thermo_single_column_is_half() {
    let out = svdwbc(&["efp-thermo", "--n", "1", "--theta", "ground"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["value"].as_f64().unwrap() - 0.5).abs() < 1e-6);
}

#[test]
fn efp_thermo_unconverged_grid_exits_3() {
    let out = svdwbc(&["efp-thermo", "--n", "1", "--cutoff", "2", "--points", "8"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn efp_finite_agrees_with_bruteforce() {
    let out = svdwbc(&["efp-finite", "--M", "6", "--n", "2", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["method"], "split-extrapolated");
    assert!(v["abs_error"].as_f64().unwrap() < 1e-8);
    let out = svdwbc(&["efp-finite", "--mu", "0.1,-0.2,0.05,0.3", "--n", "3"]);
    let v = json(&out);
    assert_eq!(v["method"], "determinant");
    assert!(v["abs_error"].as_f64().unwrap() < 1e-12);
}

#[test]
fn partition_matches_explicit_rapidities() {
    let a = json(&svdwbc(&["partition", "--M", "2", "--lambda", "0.2"]));
    let z = a["z"][0].as_f64().unwrap();
    assert!(z.is_finite() && z != 0.0);
    assert_eq!(svdwbc(&["partition", "--M", "4", "--lambda", "0.2"]).status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# scan point\ngamma = 0.9\nN = 3\nmu = homogeneous\n").unwrap();
    let out_path = dir.path().join("roots.json");
    let out = svdwbc(&[
        "solve-bae",
        "--config",
        cfg.to_str().unwrap(),
        "--gamma",
        "0.4",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["config"]["gamma"], 0.4);
    assert_eq!(v["M"], 6);

    std::fs::write(&cfg, "colour = blue\n").unwrap();
    let out = svdwbc(&["solve-bae", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mu_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("mu.txt");
    std::fs::write(&f, "0.1, -0.1\n0.2 -0.2\n").unwrap();
    let arg = format!("@{}", f.display());
    let v = json(&svdwbc(&["solve-bae", "--mu", &arg]));
    assert_eq!(v["M"], 4);
    assert_eq!(v["mu"][2], 0.2);
    assert_eq!(svdwbc(&["solve-bae", "--mu", "@/nonexistent/mu"]).status.code(), Some(2));
}
