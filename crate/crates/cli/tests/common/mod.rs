// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.json"))
}

/// Runs the binary with `MARKOV_TOL` cleared so the environment cannot leak
/// into expectations.
pub fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_umarkov"))
        .args(args)
        .env_remove("MARKOV_TOL")
        .output()
        .expect("binary runs")
}

pub fn run_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_umarkov"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Golden fixtures: a name and the arguments, without `--out`.
pub fn golden_cases() -> Vec<(&'static str, Vec<String>)> {
    let f = |n: &str| fixture(n).to_string_lossy().into_owned();
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    vec![
        ("cost_cnot", s(&["cost", "--gate", "cnot"])),
        ("cost_swap_d3", s(&["cost", "--gate", "swap", "--d", "3"])),
        ("cost_cphase", s(&["cost", "--gate", "cphase(0.3)"])),
        (
            "cost_unitary_file",
            vec!["cost".into(), "--unitary".into(), f("cnot_unitary.json")],
        ),
        ("analyze_cnot", s(&["analyze", "--gate", "cnot"])),
        ("analyze_swap", s(&["analyze", "--gate", "swap"])),
        ("analyze_identity_d3", s(&["analyze", "--gate", "identity", "--d", "3"])),
        ("simulate_cnot", s(&["simulate", "--gate", "cnot"])),
        ("simulate_cz", s(&["simulate", "--gate", "cz"])),
        ("simulate_identity", s(&["simulate", "--gate", "identity"])),
        ("verify_cnot", s(&["verify", "--gate", "cnot"])),
        (
            "verify_cnot_identity_instrument",
            vec![
                "verify".into(),
                "--gate".into(),
                "cnot".into(),
                "--vlist".into(),
                f("identity_vlist.json"),
            ],
        ),
        ("verify_identity", s(&["verify", "--gate", "identity"])),
    ]
}

/// Runs a golden case with `--out` into `dir` and returns the file bytes
/// and the exit code.
pub fn run_golden(args: &[String], dir: &Path, tag: &str) -> (Vec<u8>, Option<i32>) {
    let out = dir.join(format!("{tag}.json"));
    let mut full: Vec<&str> = args.iter().map(String::as_str).collect();
    let out_s = out.to_string_lossy().into_owned();
    full.extend(["--out", &out_s]);
    let o = run(&full);
    let bytes = std::fs::read(&out).unwrap_or_default();
    (bytes, o.status.code())
}
