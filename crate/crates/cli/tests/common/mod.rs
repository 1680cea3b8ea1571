#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_crossstitch"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("utf8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf8 stderr"),
    }
}

pub fn recipe(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../recipes")
        .join(format!("{name}.json"))
}

pub fn recipe_str(name: &str) -> String {
    recipe(name).to_str().expect("utf8 path").to_string()
}

/// Header plus rows of a CSV file, split on commas.
pub fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).expect("csv exists");
    let mut lines = text.lines();
    let header = lines.next().expect("header").split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

pub fn column(header: &[String], name: &str) -> usize {
    header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("column {name} missing from {header:?}"))
}

pub fn num(s: &str) -> f64 {
    s.parse().unwrap_or_else(|_| panic!("not a number: {s}"))
}

/// True if `s` looks like C `%.12e` output.
pub fn is_sci(s: &str) -> bool {
    if s == "nan" || s == "inf" || s == "-inf" {
        return true;
    }
    let body = s.strip_prefix('-').unwrap_or(s);
    let Some((m, e)) = body.split_once('e') else {
        return false;
    };
    let m_ok =
        m.len() == 14 && m.as_bytes()[1] == b'.' && m.bytes().enumerate().all(|(i, b)| i == 1 || b.is_ascii_digit());
    let e_ok = (e.starts_with('+') || e.starts_with('-')) && e.len() >= 3 && e[1..].bytes().all(|b| b.is_ascii_digit());
    m_ok && e_ok
}
