//! Plain-text matrix and label files.
//!
//! Matrices are comma-separated, one row per line, no header. Lines starting
//! with `#` and blank lines are ignored. Labels are one nonnegative integer per
//! line.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ndarray::Array2;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

pub fn read_matrix(path: &Path) -> Result<Array2<f64>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_matrix(&text, path)
}

pub fn parse_matrix(text: &str, path: &Path) -> Result<Array2<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut values = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let parse_err = |message: String| CliError::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        match cols {
            None => cols = Some(record.len()),
            Some(c) if c != record.len() => {
                return Err(parse_err(format!("expected {c} fields, found {}", record.len())));
            }
            _ => {}
        }
        for field in record.iter() {
            let v: f64 = field
                .parse()
                .map_err(|_| parse_err(format!("not a number: '{field}'")))?;
            if !v.is_finite() {
                return Err(parse_err(format!("non-finite value '{field}'")));
            }
            values.push(v);
        }
        rows += 1;
    }
    let cols = cols.ok_or_else(|| CliError::Parse {
        path: path.to_path_buf(),
        line: 0,
        message: "file contains no rows".into(),
    })?;
    Ok(Array2::from_shape_vec((rows, cols), values).expect("row lengths checked above"))
}

pub fn read_labels(path: &Path) -> Result<Vec<usize>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut labels = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let label = line.parse().map_err(|_| CliError::Parse {
            path: path.to_path_buf(),
            line: n as u64 + 1,
            message: format!("not a nonnegative integer label: '{line}'"),
        })?;
        labels.push(label);
    }
    Ok(labels)
}

/// Comma-separated rows, 17 significant digits per value.
pub fn format_matrix(matrix: &Array2<f64>) -> String {
    let mut out = String::new();
    for row in matrix.rows() {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            write!(out, "{v:.16e}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn write_matrix(path: &Path, matrix: &Array2<f64>) -> Result<()> {
    fs::write(path, format_matrix(matrix)).map_err(|e| CliError::io(path, e))
}

pub fn write_labels(path: &Path, labels: &[usize]) -> Result<()> {
    let text: String = labels.iter().map(|l| format!("{l}\n")).collect();
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Size and content hash of a parsed matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub rows: usize,
    pub cols: usize,
    pub sha256: String,
}

impl Fingerprint {
    pub fn of(matrix: &Array2<f64>) -> Self {
        let mut hasher = Sha256::new();
        for v in matrix.iter() {
            hasher.update(v.to_bits().to_le_bytes());
        }
        Fingerprint {
            rows: matrix.nrows(),
            cols: matrix.ncols(),
            sha256: hex::encode(hasher.finalize()),
        }
    }
}
