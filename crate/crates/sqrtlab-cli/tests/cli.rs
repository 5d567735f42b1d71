//! End-to-end tests of the `sqrtlab` binary: subcommand output, exit
//! codes, and the determinism contract.

use std::path::PathBuf;
use std::process::{Command, Output};

fn sqrtlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqrtlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn sqrt_rows() {
    let out = sqrtlab(&["sqrt", "--modulus", "15", "--value", "4"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "r,m,root\n15,4,2\n15,4,7\n15,4,8\n15,4,13\n");
    // Non-residue: header only.
    let out = sqrtlab(&["sqrt", "--modulus", "5", "--value", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "r,m,root\n");
}

#[test]
fn energy_worked_instance() {
    let out = sqrtlab(&["energy", "--r", "7", "--m", "4", "--h", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let data = text.lines().nth(1).unwrap();
    assert!(data.starts_with("7,1,4,3,convolution,24,24,96,"), "{data}");
    assert!(data.contains("4.7616000000000000e4"), "{data}");
}

#[test]
fn lattice_golden_row() {
    // r = 5 squarefree: d = 1 reduces trivially, the box is (H², 4M).
    let out = sqrtlab(&[
        "lattice", "--r", "5", "--d", "1", "--k", "1", "--h", "2", "--m", "1",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let data = text.lines().nth(1).unwrap();
    let cells: Vec<&str> = data.split(',').collect();
    // lambda1_exact and lambda2_exact columns.
    assert_eq!(cells[13], "1/4");
    assert_eq!(cells[15], "3/4");
    assert_eq!(cells[21], "17");
}

#[test]
fn jsonl_format() {
    let out = sqrtlab(&["--format", "jsonl", "sqrt", "--modulus", "7", "--value", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "{\"r\":7,\"m\":2,\"root\":3}\n{\"r\":7,\"m\":2,\"root\":4}\n");
}

#[test]
fn config_error_exit_code() {
    let out = sqrtlab(&["energy", "--r", "15", "--j", "3", "--m", "4", "--h", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = sqrtlab(&["sweep", "--config", "/nonexistent/x.cfg"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cap_exceeded_exit_code() {
    // Pairing engine refuses heavy spectra with exit code 3.
    let out = sqrtlab(&[
        "energy", "--r", "101", "--m", "50", "--h", "25", "--engine", "pairing",
        "--brute-mass", "10",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sieve_rows_have_extreme_point() {
    let out = sqrtlab(&["sieve", "--q", "4", "--r-max", "2", "--z-points", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "Q,N,r,b,z,z_num,z_den,P,ratio_P_sqrtQ"
    );
    // First row: r = 1, b = 0, extreme z = 1/8.
    let first = lines.next().unwrap();
    assert!(first.starts_with("4,64,1,0,1.2500000000000000e-1,1,8,"), "{first}");
}

#[test]
fn sweep_runs_twice_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path: PathBuf = dir.path().join("energy.cfg");
    let out_a: PathBuf = dir.path().join("a.csv");
    let out_b: PathBuf = dir.path().join("b.csv");
    std::fs::write(
        &cfg_path,
        "[sweep]\nsubject = energy\nseed = 42\n[grid]\nr = 101,103\nj = 1\nM = 10,20\nH = 2,5\n",
    )
    .unwrap();
    let run_a = sqrtlab(&[
        "sweep", "--config", cfg_path.to_str().unwrap(), "--out", out_a.to_str().unwrap(),
    ]);
    assert!(run_a.status.success(), "{}", String::from_utf8_lossy(&run_a.stderr));
    let run_b = sqrtlab(&[
        "sweep", "--config", cfg_path.to_str().unwrap(), "--out", out_b.to_str().unwrap(),
        "--threads", "4",
    ]);
    assert!(run_b.status.success());
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b, "same config and seed must be byte-identical across thread counts");
    // 8 grid cells -> 8 rows plus header.
    assert_eq!(a.iter().filter(|&&c| c == b'\n').count(), 9);
}

#[test]
fn sweep_empty_grid_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("bad.cfg");
    std::fs::write(&cfg_path, "[sweep]\nsubject = energy\n[grid]\nr = 101\nj = 1\nM = 10\n")
        .unwrap();
    let out = sqrtlab(&["sweep", "--config", cfg_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_quick_passes() {
    let out = sqrtlab(&["verify", "--level", "quick"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert_eq!(text.matches("PASS").count(), 11, "{text}");
    assert!(text.contains("all 11 criteria passed"));
}
