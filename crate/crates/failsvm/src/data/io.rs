//! Strict CSV readers and writers for load-path records.
//!
//! Three schemas are supported, all UTF-8 with LF line endings, a decimal
//! point and no thousands separators:
//!
//! - homogenized paths: [`HOMOGENIZED_HEADER`]
//! - raw reference-DOF paths: [`RAW_HEADER`] (homogenized on ingest)
//! - labeled dataset export: [`LABELED_HEADER`]

use crate::data::{
    homogenize_increment, HomogenizedIncrement, Label, LoadPath, PlateGeometry, RawIncrement,
    DEFAULT_EPS_DIV,
};
use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

pub const HOMOGENIZED_HEADER: &str = "path_id,increment,eps11,eps22,gam12,sig11,sig22,sig12";
pub const RAW_HEADER: &str = "path_id,increment,time,U1,U2,U3,U4,F1,F2,F3,F4";
pub const LABELED_HEADER: &str = "path_id,increment,eps11,eps22,gam12,sig11,sig22,sig12,label";

/// One row of a labeled dataset export.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledRow {
    pub path_id: String,
    pub increment: usize,
    pub record: HomogenizedIncrement,
    pub label: Label,
}

/// Reads homogenized load paths from a CSV file.
pub fn ingest_paths(path: impl AsRef<Path>) -> Result<Vec<LoadPath>> {
    ingest_paths_with_eps_div(path, DEFAULT_EPS_DIV)
}

pub fn ingest_paths_with_eps_div(path: impl AsRef<Path>, eps_div: f64) -> Result<Vec<LoadPath>> {
    let text = read_file(path.as_ref())?;
    parse_homogenized(&text, eps_div)
}

/// Reads raw reference-DOF paths and homogenizes them on the fly.
pub fn ingest_raw_paths(
    path: impl AsRef<Path>,
    geom: &PlateGeometry,
    eps_div: f64,
) -> Result<Vec<LoadPath>> {
    let text = read_file(path.as_ref())?;
    parse_raw(&text, geom, eps_div)
}

/// Parses the homogenized schema from an in-memory string.
pub fn parse_homogenized(text: &str, eps_div: f64) -> Result<Vec<LoadPath>> {
    let mut groups = PathGroups::default();
    let mut saw_rows = false;
    for (row, line) in rows(text, HOMOGENIZED_HEADER)? {
        saw_rows = true;
        let fields = split_row(line, row, 8)?;
        let increment = parse_index(fields[1], row, "increment")?;
        let mut vals = [0.0; 6];
        for (k, v) in vals.iter_mut().enumerate() {
            *v = parse_number(fields[2 + k], row)?;
        }
        let record =
            HomogenizedIncrement::new([vals[0], vals[1], vals[2]], [vals[3], vals[4], vals[5]])
                .map_err(|e| Error::Parse {
                    row,
                    msg: e.to_string(),
                })?;
        groups.push(fields[0], row, increment, record)?;
    }
    if !saw_rows {
        return Err(Error::EmptyDataset("no data rows".into()));
    }
    groups.into_paths(eps_div)
}

/// Parses the raw schema from an in-memory string, homogenizing each row.
pub fn parse_raw(text: &str, geom: &PlateGeometry, eps_div: f64) -> Result<Vec<LoadPath>> {
    let mut groups = PathGroups::default();
    let mut last_time: HashMap<String, f64> = HashMap::new();
    let mut saw_rows = false;
    for (row, line) in rows(text, RAW_HEADER)? {
        saw_rows = true;
        let fields = split_row(line, row, 11)?;
        let increment = parse_index(fields[1], row, "increment")?;
        let time = parse_number(fields[2], row)?;
        let mut u = [0.0; 4];
        let mut f = [0.0; 4];
        for k in 0..4 {
            u[k] = parse_number(fields[3 + k], row)?;
            f[k] = parse_number(fields[7 + k], row)?;
        }
        if let Some(&prev) = last_time.get(fields[0]) {
            if time <= prev {
                return Err(Error::Parse {
                    row,
                    msg: format!(
                        "time {time} not strictly increasing within path {} (previous {prev})",
                        fields[0]
                    ),
                });
            }
        }
        last_time.insert(fields[0].to_string(), time);
        let raw = RawIncrement { u, f, time };
        let record = homogenize_increment(&raw, geom, eps_div).map_err(|e| Error::Parse {
            row,
            msg: e.to_string(),
        })?;
        groups.push(fields[0], row, increment, record)?;
    }
    if !saw_rows {
        return Err(Error::EmptyDataset("no data rows".into()));
    }
    groups.into_paths(eps_div)
}

/// Parses a labeled dataset export.
pub fn parse_labeled(text: &str) -> Result<Vec<LabeledRow>> {
    let mut out = Vec::new();
    for (row, line) in rows(text, LABELED_HEADER)? {
        let fields = split_row(line, row, 9)?;
        let increment = parse_index(fields[1], row, "increment")?;
        let mut vals = [0.0; 6];
        for (k, v) in vals.iter_mut().enumerate() {
            *v = parse_number(fields[2 + k], row)?;
        }
        let record =
            HomogenizedIncrement::new([vals[0], vals[1], vals[2]], [vals[3], vals[4], vals[5]])
                .map_err(|e| Error::Parse {
                    row,
                    msg: e.to_string(),
                })?;
        let label = match fields[8] {
            "1" | "+1" => Label::NonFailed,
            "-1" => Label::Failed,
            other => {
                return Err(Error::Parse {
                    row,
                    msg: format!("label must be -1 or 1, got {other:?}"),
                })
            }
        };
        out.push(LabeledRow {
            path_id: fields[0].to_string(),
            increment,
            record,
            label,
        });
    }
    if out.is_empty() {
        return Err(Error::EmptyDataset("no data rows".into()));
    }
    Ok(out)
}

/// Reads a labeled dataset export from a file.
pub fn read_labeled(path: impl AsRef<Path>) -> Result<Vec<LabeledRow>> {
    let text = read_file(path.as_ref())?;
    parse_labeled(&text)
}

/// Serializes load paths in the homogenized schema.
pub fn write_paths(paths: &[LoadPath]) -> String {
    let mut out = String::from(HOMOGENIZED_HEADER);
    out.push('\n');
    for path in paths {
        for (i, inc) in path.increments.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                path.path_id,
                i,
                inc.eps[0],
                inc.eps[1],
                inc.eps[2],
                inc.sig[0],
                inc.sig[1],
                inc.sig[2]
            );
        }
    }
    out
}

pub fn export_paths(file: impl AsRef<Path>, paths: &[LoadPath]) -> Result<()> {
    let file = file.as_ref();
    fs::write(file, write_paths(paths)).map_err(|e| Error::io(file.display().to_string(), e))
}

/// Serializes labeled rows (homogenized schema plus a label column).
pub fn write_labeled(rows: &[LabeledRow]) -> String {
    let mut out = String::from(LABELED_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.path_id,
            r.increment,
            r.record.eps[0],
            r.record.eps[1],
            r.record.eps[2],
            r.record.sig[0],
            r.record.sig[1],
            r.record.sig[2],
            i8::from(r.label)
        );
    }
    out
}

pub fn export_labeled(file: impl AsRef<Path>, rows: &[LabeledRow]) -> Result<()> {
    let file = file.as_ref();
    fs::write(file, write_labeled(rows)).map_err(|e| Error::io(file.display().to_string(), e))
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Header check plus an iterator of (1-based row number, line) pairs.
fn rows<'a>(
    text: &'a str,
    header: &str,
) -> Result<impl Iterator<Item = (usize, &'a str)> + use<'a>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        None => return Err(Error::EmptyDataset("file is empty".into())),
        Some((_, first)) => {
            let first = first.strip_suffix('\r').unwrap_or(first);
            if first.trim().is_empty() && text.trim().is_empty() {
                return Err(Error::EmptyDataset("file is empty".into()));
            }
            if first != header {
                return Err(Error::Parse {
                    row: 1,
                    msg: format!("header mismatch: expected {header:?}, got {first:?}"),
                });
            }
        }
    }
    Ok(lines.filter_map(|(i, line)| {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.is_empty() {
            None
        } else {
            Some((i + 1, line))
        }
    }))
}

fn split_row(line: &str, row: usize, expected: usize) -> Result<Vec<&str>> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != expected {
        return Err(Error::Parse {
            row,
            msg: format!("expected {expected} columns, got {}", fields.len()),
        });
    }
    if fields[0].is_empty() {
        return Err(Error::Parse {
            row,
            msg: "empty path_id".into(),
        });
    }
    Ok(fields)
}

fn parse_number(field: &str, row: usize) -> Result<f64> {
    let v: f64 = field.parse().map_err(|_| Error::Parse {
        row,
        msg: format!("non-numeric cell {field:?}"),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            row,
            msg: format!("non-finite cell {field:?}"),
        });
    }
    Ok(v)
}

fn parse_index(field: &str, row: usize, name: &str) -> Result<usize> {
    field.parse().map_err(|_| Error::Parse {
        row,
        msg: format!("{name} must be a non-negative integer, got {field:?}"),
    })
}

/// Accumulates rows into per-path groups, preserving first-appearance order
/// and enforcing strictly increasing increment indices.
#[derive(Default)]
struct PathGroups {
    order: Vec<String>,
    by_id: HashMap<String, Vec<(usize, HomogenizedIncrement)>>,
}

impl PathGroups {
    fn push(
        &mut self,
        path_id: &str,
        row: usize,
        increment: usize,
        record: HomogenizedIncrement,
    ) -> Result<()> {
        let entry = match self.by_id.get_mut(path_id) {
            Some(e) => e,
            None => {
                self.order.push(path_id.to_string());
                self.by_id.entry(path_id.to_string()).or_default()
            }
        };
        if let Some(&(last, _)) = entry.last() {
            if increment <= last {
                return Err(Error::Parse {
                    row,
                    msg: format!(
                        "increment {increment} not strictly increasing within path {path_id} (previous {last})"
                    ),
                });
            }
        }
        entry.push((increment, record));
        Ok(())
    }

    fn into_paths(mut self, eps_div: f64) -> Result<Vec<LoadPath>> {
        self.order
            .iter()
            .map(|id| {
                let incs = self.by_id.remove(id).expect("group exists");
                let records = incs.into_iter().map(|(_, r)| r).collect();
                LoadPath::with_eps_div(id.clone(), records, eps_div)
            })
            .collect()
    }
}
