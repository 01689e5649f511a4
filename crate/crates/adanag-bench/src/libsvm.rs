//! LIBSVM sparse text format: `label idx:val idx:val ...` with 1-based,
//! strictly increasing indices.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use adanag_core::objective::SparseMatrix;
use flate2::read::MultiGzDecoder;

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    /// Rows in file order, indices stored 0-based.
    pub a: SparseMatrix,
    pub labels: Vec<f64>,
    pub n_features: usize,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> BenchError {
    BenchError::Parse { line, column, message: message.into() }
}

/// Splits on whitespace and yields (1-based character column, token).
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (byte, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((col + 1, byte)),
            (true, Some((c, b))) => {
                out.push((c, &line[b..byte]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((c, b)) = start {
        out.push((c, &line[b..]));
    }
    out.into_iter()
}

fn number(tok: &str, line: usize, column: usize) -> Result<f64> {
    match tok.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(parse_err(line, column, format!("non-numeric token {tok:?}"))),
    }
}

/// Parses a LIBSVM stream. `n_features`, when given, fixes the width and must
/// cover every index in the file.
pub fn parse_libsvm<R: BufRead>(reader: R, n_features: Option<usize>) -> Result<Dataset> {
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut labels = Vec::new();
    // largest 1-based index and where it first appeared
    let mut widest: (usize, usize, usize) = (0, 0, 0);
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| parse_err(lineno, 1, format!("read failed: {e}")))?;
        let body = line.split('#').next().unwrap_or("");
        let mut toks = tokens(body);
        let Some((col, label)) = toks.next() else { continue };
        labels.push(number(label, lineno, col)?);
        let mut row = Vec::new();
        let mut prev = 0usize;
        for (col, tok) in toks {
            let Some((idx, val)) = tok.split_once(':') else {
                return Err(parse_err(lineno, col, format!("non-numeric token {tok:?} (expected idx:val)")));
            };
            let idx: i64 = idx.parse().map_err(|_| parse_err(lineno, col, format!("non-numeric token {tok:?}")))?;
            if idx <= 0 {
                return Err(parse_err(lineno, col, format!("index {idx} is not positive (indices are 1-based)")));
            }
            let idx = idx as usize;
            if idx <= prev {
                return Err(parse_err(lineno, col, format!("non-increasing index {idx} after {prev}")));
            }
            prev = idx;
            let v = number(val, lineno, col + tok.find(':').map_or(0, |p| p + 1))?;
            if idx > widest.0 {
                widest = (idx, lineno, col);
            }
            row.push((idx - 1, v));
        }
        rows.push(row);
    }
    let n = match n_features {
        Some(n) if n < widest.0 => {
            return Err(parse_err(widest.1, widest.2, format!("index {} exceeds n_features = {n}", widest.0)))
        }
        Some(n) => n,
        None => widest.0,
    };
    let a = SparseMatrix::from_rows(n, &rows)?;
    Ok(Dataset { a, labels, n_features: n })
}

pub fn parse_libsvm_str(text: &str, n_features: Option<usize>) -> Result<Dataset> {
    parse_libsvm(text.as_bytes(), n_features)
}

/// Reads a file, decompressing when the name ends in `.gz`.
pub fn read_libsvm(path: &Path, n_features: Option<usize>) -> Result<Dataset> {
    let file = File::open(path).map_err(BenchError::io(path))?;
    let reader: Box<dyn Read> =
        if path.extension().is_some_and(|e| e == "gz") { Box::new(MultiGzDecoder::new(file)) } else { Box::new(file) };
    parse_libsvm(BufReader::new(reader), n_features)
}

/// Writes the dataset back in LIBSVM form with shortest round-trip floats.
pub fn serialize(ds: &Dataset) -> String {
    let mut out = String::new();
    for (i, y) in ds.labels.iter().enumerate() {
        let _ = write!(out, "{y}");
        let (idx, val) = ds.a.row(i);
        for (j, v) in idx.iter().zip(val) {
            let _ = write!(out, " {}:{v}", j + 1);
        }
        out.push('\n');
    }
    out
}

/// Maps the smaller of two label values to 0 and the larger to 1. Labels
/// already in {0, 1} pass through unchanged.
pub fn normalize_labels(labels: &[f64]) -> Result<Vec<f64>> {
    if let Some(bad) = labels.iter().find(|v| !v.is_finite()) {
        return Err(BenchError::Data(format!("label {bad} is not finite")));
    }
    if labels.iter().all(|v| *v == 0.0 || *v == 1.0) {
        return Ok(labels.to_vec());
    }
    let distinct: BTreeSet<u64> = labels.iter().map(|v| ordered_bits(*v)).collect();
    let values: Vec<f64> = distinct.iter().map(|b| from_ordered_bits(*b)).collect();
    let listing = values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ");
    match values.len() {
        2 => Ok(labels.iter().map(|v| if *v == values[0] { 0.0 } else { 1.0 }).collect()),
        1 => Err(BenchError::Data(format!("1 distinct label {{{listing}}}; need two classes"))),
        n => Err(BenchError::Data(format!("{n} distinct labels {{{listing}}}; need exactly two"))),
    }
}

// total order on finite floats with −0 folded into +0
fn ordered_bits(v: f64) -> u64 {
    let v = if v == 0.0 { 0.0 } else { v };
    let b = v.to_bits();
    if b >> 63 == 1 {
        !b
    } else {
        b | 1 << 63
    }
}

fn from_ordered_bits(b: u64) -> f64 {
    f64::from_bits(if b >> 63 == 1 { b & !(1 << 63) } else { !b })
}
