#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scatter1d"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Data rows: everything after the header that is not a `#` line.
pub fn data_rows(stdout: &[u8]) -> usize {
    String::from_utf8_lossy(stdout)
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .count()
}

/// `(subcommand, fixture, exit code, data rows)`.
pub const CONTRACT: &[(&str, &str, i32, usize)] = &[
    ("amplitudes", "delta_valid.conf", 0, 3),
    ("series", "delta_valid.conf", 0, 3 * 17),
    ("compare", "delta_valid.conf", 0, 3),
    ("amplitudes", "comb_log.conf", 0, 12),
    ("compare", "comb_log.conf", 0, 12),
    ("series", "comb_log.conf", 1, 0),
    ("amplitudes", "barrier_evanescent.conf", 0, 10),
    ("series", "barrier_evanescent.conf", 0, 10 * 14),
    ("compare", "barrier_evanescent.conf", 0, 10),
    ("amplitudes", "barrier_pole.conf", 2, 3),
    ("compare", "barrier_pole.conf", 2, 3),
    ("series", "delta_divergent.conf", 3, 11),
    ("series", "delta_shanks.conf", 0, 12),
    ("amplitudes", "malformed.conf", 1, 0),
    ("amplitudes", "unknown_key.conf", 1, 0),
    ("amplitudes", "bad_grid.conf", 1, 0),
];
