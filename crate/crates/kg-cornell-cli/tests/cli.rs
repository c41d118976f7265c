//! End-to-end tests of the binary: schemas, determinism, option precedence,
//! exit codes, and the validation runner's contract.

use assert_cmd::Command;
use predicates::prelude::*;
use std::fs;

fn cmd() -> Command {
    Command::cargo_bin("kg-cornell").unwrap()
}

#[test]
fn spectrum_default_grid_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("a.csv");
    let out2 = dir.path().join("b.csv");
    cmd()
        .current_dir(dir.path())
        .args(["spectrum", "--out", out1.to_str().unwrap()])
        .assert()
        .success();
    cmd()
        .current_dir(dir.path())
        .args(["spectrum", "--out", out2.to_str().unwrap()])
        .assert()
        .success();
    let a = fs::read(&out1).unwrap();
    let b = fs::read(&out2).unwrap();
    assert_eq!(a, b, "identical runs must be byte-identical");

    let text = String::from_utf8(a).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "D,n,l,variant,k,E_plus,E_minus,status");
    // n = 1..=5, l = 0..n-1, D = 1..=6
    assert_eq!(lines.len(), 1 + 90);
    assert!(!text.contains('\r'), "LF endings only");
    assert!(text.lines().skip(1).all(|l| l.ends_with(",ok")));
}

#[test]
fn spectrum_grid_size_follows_flags() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    cmd()
        .args([
            "spectrum",
            "--dims",
            "3",
            "--nmax",
            "1",
            "--out",
            out.to_str().unwrap(),
        ])
        .assert()
        .success();
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 1 + 1); // header + single (1, 0, 3) cell
                                             // golden row: the spectrum path is pure +,*,/,sqrt, so this is
                                             // bit-reproducible across platforms
    assert_eq!(
        text.lines().nth(1).unwrap(),
        "3,1,0,table1,1.103494911e1,5.670262670e0,-5.668262670e0,ok"
    );
}

#[test]
fn invalid_couplings_are_a_usage_error_before_compute() {
    cmd()
        .args(["spectrum", "--bs", "1", "--bv", "2"])
        .assert()
        .code(2)
        .stderr(predicate::str::starts_with("error[usage]:"));
}

#[test]
fn unknown_flag_is_single_line_usage_error() {
    let assert = cmd().args(["spectrum", "--什么"]).assert().code(2);
    let stderr = String::from_utf8(assert.get_output().stderr.clone()).unwrap();
    assert_eq!(stderr.trim_end().lines().count(), 1, "one-line reason");
    assert!(stderr.starts_with("error[usage]:"));
}

#[test]
fn config_file_unknown_key_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(&conf, "bs = 2\nwidgets = 9\n").unwrap();
    cmd()
        .args(["spectrum", "--config", conf.to_str().unwrap()])
        .assert()
        .code(2)
        .stderr(predicate::str::contains("error[config]: line 2"));
}

#[test]
fn flags_override_config_entries() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    // config alone is invalid (b_s < |b_v|); the flag must win and succeed
    fs::write(&conf, "# reference linear strengths\nbs = 0.5\n").unwrap();
    let out = dir.path().join("s.csv");
    cmd()
        .args([
            "spectrum",
            "--config",
            conf.to_str().unwrap(),
            "--bs",
            "2",
            "--out",
            out.to_str().unwrap(),
        ])
        .assert()
        .success();
    // and without the flag the config value applies (usage error: 0.5 < 2)
    cmd()
        .args(["spectrum", "--config", conf.to_str().unwrap(), "--bv", "2"])
        .assert()
        .code(2)
        .stderr(predicate::str::starts_with("error[usage]:"));
}

#[test]
fn config_file_drives_non_coupling_options_too() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(&conf, "mu-min = 2\nmu-max = 4\npoints = 5\nmethod = direct\n").unwrap();
    let out = dir.path().join("t.csv");
    cmd()
        .args([
            "thermo",
            "--config",
            conf.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ])
        .assert()
        .success();
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 5);
    assert!(lines[1].starts_with("2.000000000e0,"));
    assert!(lines[5].starts_with("4.000000000e0,"));
}

#[test]
fn thermo_grid_row_count_and_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    cmd()
        .args([
            "thermo",
            "--mu-min",
            "1",
            "--mu-max",
            "5",
            "--points",
            "9",
            "--method",
            "direct",
            "--out",
            out.to_str().unwrap(),
        ])
        .assert()
        .success();
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "mu,Z_direct,Z_em,F_bar,U_bar,S_bar,Cv_bar");
    assert_eq!(lines.len(), 1 + 9);
    assert!(lines[1].starts_with("1.000000000e0,"));
    assert!(lines[9].starts_with("5.000000000e0,"));
}

#[test]
fn thermo_requires_a_single_dimension() {
    cmd()
        .args(["thermo", "--dims", "1..6"])
        .assert()
        .code(2)
        .stderr(predicate::str::contains("single dimension"));
}

#[test]
fn wavefunction_two_samples_are_the_endpoints() {
    let assert = cmd()
        .args([
            "wavefunction",
            "--samples",
            "2",
            "--rmax",
            "5",
            "--out",
            "-",
        ])
        .assert()
        .success();
    let stdout = String::from_utf8(assert.get_output().stdout.clone()).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "r,R_paper,R_exact");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("0.000000000e0,"));
    assert!(lines[2].starts_with("5.000000000e0,"));
}

#[test]
fn ode_emits_one_row_per_node_count() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.csv");
    // oscillator limit keeps this fast and analytic
    cmd()
        .args([
            "ode",
            "--M",
            "0",
            "--av",
            "0",
            "--as",
            "0",
            "--bv",
            "0",
            "--bs",
            "2",
            "--nodes",
            "0",
            "--bracket",
            "1.5,3.5",
            "--out",
            out.to_str().unwrap(),
        ])
        .assert()
        .success();
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "D,l,nodes,E_numeric,residual,h");
    assert_eq!(lines.len(), 2);
    let e: f64 = lines[1].split(',').nth(3).unwrap().parse().unwrap();
    assert!((e - 2.449489742783178).abs() < 1e-6, "E = {e}");
}

#[test]
fn ode_empty_bracket_is_a_compute_failure() {
    cmd()
        .args([
            "ode",
            "--M",
            "0",
            "--av",
            "0",
            "--as",
            "0",
            "--bv",
            "0",
            "--bs",
            "2",
            "--bracket",
            "0.2,1.0",
            "--out",
            "-",
        ])
        .assert()
        .code(1)
        .stderr(predicate::str::starts_with("error[compute]:"));
}

#[test]
fn unwritable_output_is_an_io_failure() {
    cmd()
        .args(["spectrum", "--out", "/nonexistent-dir/s.csv"])
        .assert()
        .code(1)
        .stderr(predicate::str::starts_with("error[io]:"));
}

#[test]
fn validate_reports_every_criterion_and_exit_matches() {
    let assert = cmd().arg("validate").assert();
    let output = assert.get_output().clone();
    let stdout = String::from_utf8(output.stdout).unwrap();
    let criterion_lines: Vec<&str> = stdout.lines().filter(|l| l.contains("/10]")).collect();
    assert_eq!(criterion_lines.len(), 10, "no short-circuiting:\n{stdout}");
    let failures = criterion_lines
        .iter()
        .filter(|l| l.contains("FAIL"))
        .count();
    let expected = i32::from(failures > 0);
    assert_eq!(
        output.status.code(),
        Some(expected),
        "exit code must be 0 iff all criteria pass\n{stdout}"
    );
    assert!(stdout.contains("criteria passed"));
}
