use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cartan-git"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Path, scenario: &str) -> Value {
    let text = fs::read_to_string(out.join(format!("{}.json", scenario))).expect("report written");
    serde_json::from_str(&text).expect("report is JSON")
}

fn check<'a>(r: &'a Value, name: &str) -> &'a Value {
    r["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap_or_else(|| panic!("no check {}", name))
}

fn csv_header(out: &Path, file: &str) -> String {
    fs::read_to_string(out.join(file)).unwrap().lines().next().unwrap().to_string()
}

#[test]
fn futaki_constancy_on_sl2() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["futaki-constancy", "--group", "sl2", "--samples", "50", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let r = report(dir.path(), "futaki-constancy");
    assert!(r["results"]["spread"].as_f64().unwrap().abs() < 1e-5);
    assert_eq!(r["results"]["samples"].as_array().unwrap().len(), 50);
    assert_eq!(r["params"]["seed"], 7);
}

#[test]
fn stability_of_the_balanced_torus_point() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["stability", "--weights", "1,-1", "--vector", "1,1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = &report(dir.path(), "stability")["results"]["verdict"];
    assert_eq!(v["label"], "stable");
    assert!((v["slope"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["no-such-scenario"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["stability", "--weights", "1,-1", "--vector", "1,1,1"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["certify", "--group", "so7"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["cp1-futaki", "--n", "7"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["density-geodesic", "--potential", "tan"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["futaki-constancy", "--zeta", "0,0,1,0"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["--tol", "-1", "cp1-futaki"]).status.code(), Some(2));
}

#[test]
fn failed_invariants_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    // every point of the defining sl2 action lies in the null cone
    let o = run(dir.path(), &["descend", "--group", "sl2", "--vector", "1,0"]);
    assert_eq!(o.status.code(), Some(1));
    let r = report(dir.path(), "descend");
    assert!(r["results"]["error"].as_str().unwrap().contains("convergence"));

    let o = run(dir.path(), &["--tol", "1e-14", "cp1-futaki"]);
    assert_eq!(o.status.code(), Some(1));
    let r = report(dir.path(), "cp1-futaki");
    let c = check(&r, "|Futaki invariant|");
    assert_eq!(c["tolerance"], 1e-14);
    assert_eq!(c["pass"], false);
}

#[test]
fn reports_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for args in [&["kn-profile", "--seed", "3"][..], &["descend", "--seed", "3"][..]] {
        run(a.path(), args);
        run(b.path(), args);
    }
    for f in ["kn-profile.json", "kn-profile_profile.csv", "descend.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{}", f);
    }
    let r = report(a.path(), "kn-profile");
    assert!(r.get("wall_time").is_none());
    assert_eq!(r["artifacts"][0], "kn-profile_profile.csv");
}

#[test]
fn csv_artifacts_have_documented_columns() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(run(d, &["kn-profile"]).status.code(), Some(0));
    assert_eq!(csv_header(d, "kn-profile_profile.csv"), "t,psi,dpsi,d2psi");
    assert_eq!(run(d, &["cp1-descend"]).status.code(), Some(0));
    assert_eq!(csv_header(d, "cp1-descend_descent.csv"), "iter,E,sup_defect");
    assert_eq!(csv_header(d, "cp1-descend_potential.csv"), "x,s,u2,S");
    assert_eq!(run(d, &["density-geodesic", "--no-refine", "--steps", "20", "--csv-every", "5"]).status.code(), Some(0));
    let traj = fs::read_to_string(d.join("density-geodesic_trajectory.csv")).unwrap();
    assert!(traj.starts_with("t,node,rho\n"));
    // slices 0, 5, 10, 15, 20 of 256 nodes
    assert_eq!(traj.lines().count(), 1 + 5 * 256);
}

#[test]
fn list_is_a_stable_registry() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(dir.path(), &["list"]);
    let b = run(dir.path(), &["list"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.lines().count() > 10);
    assert!(text.contains("density-geodesic") && text.contains("Cartan geodesics of densities"));
}

#[test]
fn all_scenarios_pass_in_parallel() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let par = run(a.path(), &["--jobs", "4", "all"]);
    assert_eq!(par.status.code(), Some(0), "{}", String::from_utf8_lossy(&par.stdout));
    assert_eq!(run(b.path(), &["all"]).stdout, par.stdout);
    assert_eq!(
        fs::read(a.path().join("cp1-kenergy.json")).unwrap(),
        fs::read(b.path().join("cp1-kenergy.json")).unwrap()
    );
}
