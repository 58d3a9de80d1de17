#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

/// The six invocations pinned by golden files, as (file stem, arguments).
pub const GOLDEN: [(&str, &[&str]); 6] = [
    ("eval", &["eval", "--L", "0", "--eta", "0", "--z", "1", "--function", "g"]),
    ("coeffs", &["coeffs", "--L", "0.5", "--eta", "0.1", "--order", "8"]),
    ("zeros", &["zeros", "--L", "0", "--eta", "0", "--radius", "4"]),
    ("certify", &["certify", "--L", "0.5", "--eta", "0.1", "--class", "lemniscate"]),
    (
        "scan",
        &[
            "scan", "--L-min", "0.4", "--L-max", "0.6", "--L-step", "0.1", "--eta-min", "-0.1", "--eta-max", "0.1",
            "--eta-step", "0.1", "--class", "exponential",
        ],
    ),
    ("verify-lemmas", &["verify-lemmas"]),
];

/// Invocations with the exit code each must produce.
pub const EXIT_CODES: [(&[&str], i32); 12] = [
    (&["eval", "--L", "0", "--eta", "0", "--z", "1", "--function", "g"], 0),
    (&["eval", "--L", "0", "--eta", "0", "--z", "0", "--function", "P"], 0),
    (&["eval", "--L", "-1", "--eta", "0", "--z", "0.5"], 3),
    (&["eval", "--L", "0", "--eta", "0", "--z", "1+"], 2),
    (&["zeros", "--L", "0", "--eta", "0", "--radius", "4"], 0),
    (&["zeros", "--L", "0", "--eta", "0", "--radius", "1"], 0),
    (&["zeros", "--L", "-1.5", "--eta", "0", "--radius", "2"], 3),
    (&["certify", "--L", "0.5", "--eta", "0.1", "--class", "lemniscate"], 0),
    (&["certify", "--L", "0.5", "--eta", "0.1", "--class", "exponential"], 0),
    (&["certify", "--L", "0.5", "--eta", "0.1", "--class", "frobnicate"], 2),
    (&["verify-lemmas"], 0),
    (&["verify-lemmas", "--m", "0.5"], 2),
];

pub fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coulomb"))
        .args(args)
        .env_remove("COULOMB_TOL")
        .output()
        .expect("spawn coulomb")
}

pub fn golden_path(stem: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{stem}.out"))
}
