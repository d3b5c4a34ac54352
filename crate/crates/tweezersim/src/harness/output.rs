//! CSV and JSON serialization with reproducibility headers.
//!
//! Every file starts with `#` comment lines carrying the config hash and the
//! master seed, so any output can be traced back to the exact run that
//! produced it. Numbers are written with the shortest round-trip `Display`
//! form, which keeps reruns byte-identical.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::adiabatic::ActionMapTable;
use crate::flight::{RRCurve, RRPoint};

#[derive(Error, Debug)]
pub enum OutputError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {reason}")]
    Malformed {
        path: String,
        line: usize,
        reason: String,
    },
    #[error("serialization failed: {0}")]
    Json(#[from] serde_json::Error),
}

/// Reproducibility header attached to every output file.
#[derive(Clone, Debug, Serialize)]
pub struct RunMeta {
    pub config_sha256: String,
    pub seed: u64,
}

impl RunMeta {
    fn comment_lines(&self) -> String {
        format!("# config_sha256 = {}\n# seed = {}\n", self.config_sha256, self.seed)
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> OutputError + '_ {
    move |source| OutputError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), OutputError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(io_err(path))?;
        }
    }
    let mut f = fs::File::create(path).map_err(io_err(path))?;
    f.write_all(contents.as_bytes()).map_err(io_err(path))
}

/// Recapture curve as CSV: `dt_us,p,sigma,n`.
pub fn write_rr_csv(path: &Path, curve: &RRCurve, meta: &RunMeta) -> Result<(), OutputError> {
    let mut out = meta.comment_lines();
    out.push_str("dt_us,p,sigma,n\n");
    for pt in &curve.points {
        out.push_str(&format!("{},{},{},{}\n", pt.dt * 1e6, pt.p, pt.sigma, pt.n_sequences));
    }
    write_file(path, &out)
}

pub fn read_rr_csv(path: &Path) -> Result<RRCurve, OutputError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let malformed = |line: usize, reason: &str| OutputError::Malformed {
        path: path.display().to_string(),
        line,
        reason: reason.to_string(),
    };
    let mut points = Vec::new();
    let mut saw_header = false;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            if line != "dt_us,p,sigma,n" {
                return Err(malformed(idx + 1, "expected header `dt_us,p,sigma,n`"));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(malformed(idx + 1, "expected four comma-separated fields"));
        }
        let num = |s: &str| -> Result<f64, OutputError> {
            s.parse().map_err(|_| malformed(idx + 1, "not a number"))
        };
        points.push(RRPoint {
            dt: num(fields[0])? * 1e-6,
            p: num(fields[1])?,
            sigma: num(fields[2])?,
            n_sequences: fields[3]
                .parse()
                .map_err(|_| malformed(idx + 1, "not an integer"))?,
        });
    }
    if !saw_header {
        return Err(malformed(1, "missing header"));
    }
    Ok(RRCurve { points })
}

/// Generic named-column table as CSV.
pub fn write_table_csv(
    path: &Path,
    columns: &[String],
    rows: &[Vec<f64>],
    meta: &RunMeta,
) -> Result<(), OutputError> {
    let mut out = meta.comment_lines();
    out.push_str(&columns.join(","));
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    write_file(path, &out)
}

/// Action map as CSV: `u_ratio,e_ratio`; the last row is exactly `1,1`.
pub fn write_action_map_csv(
    path: &Path,
    table: &ActionMapTable,
    meta: &RunMeta,
) -> Result<(), OutputError> {
    let mut out = meta.comment_lines();
    out.push_str("u_ratio,e_ratio\n");
    for &(u, e) in &table.rows {
        out.push_str(&format!("{u},{e}\n"));
    }
    write_file(path, &out)
}

/// Pretty JSON with the meta block injected at the top level.
pub fn write_json<T: Serialize>(path: &Path, value: &T, meta: &RunMeta) -> Result<(), OutputError> {
    let mut root = serde_json::to_value(value)?;
    if let serde_json::Value::Object(map) = &mut root {
        map.insert("config_sha256".into(), meta.config_sha256.clone().into());
        map.insert("seed".into(), meta.seed.into());
    }
    let mut text = serde_json::to_string_pretty(&root)?;
    text.push('\n');
    write_file(path, &text)
}
