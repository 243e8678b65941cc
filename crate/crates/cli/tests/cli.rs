//! End-to-end runs of the `contrast` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn write_config(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path
}

fn contrast(sub: &str, config: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_contrast")).arg(sub).arg(config).output().unwrap()
}

/// Runs `sub` with `body` plus an `output` line; returns (exit code, CSV).
fn run_to_file(sub: &str, body: &str) -> (i32, String) {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out.csv");
    let config = write_config(&dir, "run.cfg", &format!("{body}\noutput = {}\n", out.display()));
    let result = contrast(sub, &config);
    let code = result.status.code().unwrap();
    (code, fs::read_to_string(&out).unwrap_or_default())
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn spectrum_defaults() {
    let (code, csv) = run_to_file("spectrum", "");
    assert_eq!(code, 0);
    assert!(csv.starts_with("mode,z,multiplicity,residual,route\n"));
    let rows = rows(&csv);
    assert!(rows.iter().any(|r| r[0] == "0" && r[1].parse::<f64>().unwrap() == 0.0));
    for r in &rows {
        assert_eq!(r.len(), 5);
        let mode: usize = r[0].parse().unwrap();
        assert!(mode <= 4);
        assert_eq!(r[2], if mode == 0 { "1" } else { "2" });
        assert_eq!(r[4], "transmission");
        assert!(r[3].parse::<f64>().unwrap() < 1e-8);
    }
}

#[test]
fn effective_lists_both_routes() {
    let (code, csv) = run_to_file("effective", "k_trunc = 200");
    assert_eq!(code, 0);
    let rows = rows(&csv);
    let route_roots = |route: &str| -> Vec<f64> {
        rows.iter().filter(|r| r[4] == route && r[1] != fmt_zero()).map(|r| r[1].parse().unwrap()).collect()
    };
    let dtn = route_roots("effective_dtn");
    let series = route_roots("effective_series");
    assert_eq!(dtn.len(), series.len());
    for (a, b) in dtn.iter().zip(&series) {
        assert!((a / b - 1.0).abs() < 1e-6);
    }
    assert!(rows.iter().any(|r| r[4] == "dirichlet_limit" && r[2] == "2"));
}

fn fmt_zero() -> String {
    contrast_cli::fmt_f64(0.0)
}

#[test]
fn steklov_values() {
    let (code, csv) = run_to_file("steklov", "r_in = 2\nr_out = 3\nmodes = 0..3");
    assert_eq!(code, 0);
    let expected = ["0", "-0.5", "-1", "-1.5"];
    assert!(csv.starts_with("mode,value\n"));
    for (row, want) in rows(&csv).iter().zip(expected) {
        assert_eq!(row[1].parse::<f64>().unwrap(), want.parse::<f64>().unwrap());
    }
}

#[test]
fn converge_eig_footer_and_slope() {
    let (code, csv) = run_to_file("converge-eig", "a_list = 1e2,1e3,1e4,1e5\nmodes = 1..1");
    assert_eq!(code, 0);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "a,err");
    assert_eq!(lines.len(), 1 + 4 + 2);
    let slope: f64 = lines[5].strip_prefix("slope,").unwrap().parse().unwrap();
    assert!(lines[6].starts_with("residual,"));
    assert!((-1.15..=-0.85).contains(&slope), "{slope}");
}

#[test]
fn converge_resolvent_slope() {
    let (code, csv) = run_to_file("converge-resolvent", "a_list = 1e2,1e3,1e4,1e5\nk_trunc = 32\nmodes = 0..2");
    assert_eq!(code, 0);
    let slope: f64 = csv.lines().nth(5).unwrap().strip_prefix("slope,").unwrap().parse().unwrap();
    assert!((-1.15..=-0.85).contains(&slope), "{slope}");
}

#[test]
fn triple_check_passes() {
    let (code, csv) = run_to_file("triple-check", "");
    assert_eq!(code, 0);
    assert!(csv.starts_with("check,passed,failed\n"));
    for r in rows(&csv) {
        assert_eq!(r[1], "100");
        assert_eq!(r[2], "0");
    }
}

#[test]
fn identical_configs_give_identical_bytes() {
    for sub in ["spectrum", "effective", "converge-eig"] {
        let (_, first) = run_to_file(sub, "a_list = 1e2,1e3,1e4");
        let (_, second) = run_to_file(sub, "a_list = 1e2,1e3,1e4");
        assert!(!first.is_empty());
        assert_eq!(first, second, "{sub}");
    }
}

#[test]
fn rows_round_trip() {
    let (_, csv) = run_to_file("spectrum", "modes = 0..2");
    for line in csv.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let (mode, z, mult, res): (usize, f64, usize, f64) =
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap(), f[3].parse().unwrap());
        let rebuilt = format!(
            "{mode},{},{mult},{},{}",
            contrast_cli::fmt_f64(z),
            contrast_cli::fmt_f64(res),
            f[4].parse::<contrast_core::Route>().unwrap()
        );
        assert_eq!(rebuilt, line);
    }
}

#[test]
fn stdout_when_output_unset() {
    let dir = TempDir::new().unwrap();
    let config = write_config(&dir, "s.cfg", "modes = 0..1\n");
    let out = contrast("steklov", &config);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("mode,value\n"));
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("steklov:"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let unknown = write_config(&dir, "bad.cfg", "radius = 3\n");
    let out = contrast("spectrum", &unknown);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("radius"));

    assert_eq!(contrast("spectrum", &dir.path().join("missing.cfg")).status.code(), Some(2));

    let short_series = write_config(&dir, "k.cfg", "k_trunc = 10\n");
    assert_eq!(contrast("effective", &short_series).status.code(), Some(2));

    // A probe on the real axis is outside the validated resolvent region.
    let real_probe = write_config(&dir, "z.cfg", "z_probe = 1,0\n");
    assert_eq!(contrast("converge-resolvent", &real_probe).status.code(), Some(2));

    // Two contrasts cannot support a slope fit.
    let two = write_config(&dir, "two.cfg", "a_list = 1e3,1e4\n");
    assert_eq!(contrast("converge-eig", &two).status.code(), Some(2));

    let unwritable = write_config(&dir, "o.cfg", &format!("output = {}\n", dir.path().join("no/such/dir.csv").display()));
    assert_eq!(contrast("steklov", &unwritable).status.code(), Some(1));

    let status = Command::new(env!("CARGO_BIN_EXE_contrast")).arg("bogus").arg(&unknown).output().unwrap();
    assert_eq!(status.status.code(), Some(2));
}
