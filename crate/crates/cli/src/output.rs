//! CSV tables, JSON reports and the metadata sidecar.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{Resolved, Tolerances};
use crate::error::CliError;

/// Formats like C's `%.12e`: twelve fractional digits and an exponent with
/// sign and at least two digits.
pub fn sci(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    let s = format!("{x:.12e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.unsigned_abs())
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Label(&'static str),
}

impl Field {
    fn render(&self, out: &mut String) {
        match self {
            Field::Num(x) => out.push_str(&sci(*x)),
            Field::Label(s) => out.push_str(s),
        }
    }
}

/// Column names carry their unit in parentheses, e.g. `k(rad)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Field>>,
    /// Rows whose status column reports a failure.
    pub failed: usize,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            failed: 0,
        }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            for (i, f) in row.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                f.render(&mut s);
            }
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FanoCase {
    pub gamma: f64,
    pub delta: f64,
    pub status: &'static str,
    pub n_values: Option<usize>,
    pub max_distance: Option<f64>,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FanoReport {
    pub status: &'static str,
    pub n_cells: usize,
    pub cases: Vec<FanoCase>,
}

impl FanoReport {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.cases {
            let dist = c.max_distance.map_or("n/a".to_string(), sci);
            let _ = writeln!(
                s,
                "gamma={} delta={} eigenvalues={} max_distance={} tol={} {}",
                sci(c.gamma),
                sci(c.delta),
                c.n_values.map_or("n/a".to_string(), |n| n.to_string()),
                dist,
                sci(c.tol),
                c.status
            );
        }
        let _ = writeln!(s, "fano-check: {}", self.status);
        s
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Table(Table),
    Report(FanoReport),
}

impl Output {
    /// File contents for `--out`.
    pub fn render(&self) -> String {
        match self {
            Output::Table(t) => t.to_csv(),
            Output::Report(r) => r.to_json(),
        }
    }

    pub fn failed(&self) -> usize {
        match self {
            Output::Table(t) => t.failed,
            Output::Report(r) => r.cases.iter().filter(|c| c.status != "pass").count(),
        }
    }

    pub fn total(&self) -> usize {
        match self {
            Output::Table(t) => t.rows.len(),
            Output::Report(r) => r.cases.len(),
        }
    }
}

pub fn config_hash(resolved: &Resolved) -> String {
    hex::encode(Sha256::digest(resolved.canonical_json().as_bytes()))
}

#[derive(Debug, Serialize)]
struct Versions {
    crossstitch: &'static str,
    crossstitch_core: &'static str,
}

#[derive(Debug, Serialize)]
struct Metadata<'a> {
    command: &'static str,
    config_sha256: String,
    config: &'a Resolved,
    tolerances: Tolerances,
    versions: Versions,
    #[serde(skip_serializing_if = "Option::is_none")]
    columns: Option<&'a [&'static str]>,
    rows: usize,
    failed: usize,
}

/// Sidecar contents: no timestamps or host details, so reruns are
/// byte-identical.
pub fn metadata_json(resolved: &Resolved, output: &Output) -> String {
    let columns = match output {
        Output::Table(t) => Some(t.columns.as_slice()),
        Output::Report(_) => None,
    };
    let meta = Metadata {
        command: resolved.command,
        config_sha256: config_hash(resolved),
        config: resolved,
        tolerances: resolved.tolerances,
        versions: Versions {
            crossstitch: env!("CARGO_PKG_VERSION"),
            crossstitch_core: crossstitch_core::VERSION,
        },
        columns,
        rows: output.total(),
        failed: output.failed(),
    };
    let mut s = serde_json::to_string_pretty(&meta).expect("metadata serializes");
    s.push('\n');
    s
}

pub fn metadata_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    let wrap = |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    };
    let mut f = std::fs::File::create(path).map_err(wrap)?;
    f.write_all(contents.as_bytes()).map_err(wrap)?;
    Ok(())
}
