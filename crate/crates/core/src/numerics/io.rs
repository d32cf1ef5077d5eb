//! Matrix files: headerless CSV rows and MatrixMarket (`coordinate` or
//! `array`, `real`, `general` or `symmetric`). Both are densified on load.
//! Writers print shortest round-trip decimals so read(write(m)) == m.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::DenseMatrix;
use crate::error::{Error, Result};

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn parse_err(path: &Path, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

/// Picks the reader by extension: `.mtx`/`.mm` are MatrixMarket, anything else CSV.
pub fn read_matrix(path: &Path) -> Result<DenseMatrix> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("mtx") | Some("mm") => read_matrix_market(path),
        _ => read_csv(path),
    }
}

pub fn read_csv(path: &Path) -> Result<DenseMatrix> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_csv(&text).map_err(|m| parse_err(path, m))
}

pub fn parse_csv(text: &str) -> std::result::Result<DenseMatrix, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| format!("row {}: {e}", i + 1))?;
        let row = record
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| format!("row {}: not a number: {f:?}", i + 1))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    DenseMatrix::from_rows(&rows).map_err(|e| e.to_string())
}

pub fn write_csv(path: &Path, m: &DenseMatrix) -> Result<()> {
    fs::write(path, format_csv(m)).map_err(|e| io_err(path, e))
}

pub fn format_csv(m: &DenseMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let line: Vec<String> = m.row(i).iter().map(|v| format!("{v:?}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn read_matrix_market(path: &Path) -> Result<DenseMatrix> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_matrix_market(&text).map_err(|m| parse_err(path, m))
}

pub fn parse_matrix_market(text: &str) -> std::result::Result<DenseMatrix, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty file")?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(format!("bad MatrixMarket banner: {header:?}"));
    }
    let coordinate = match tokens[2].as_str() {
        "coordinate" => true,
        "array" => false,
        other => return Err(format!("unsupported format {other:?}")),
    };
    if tokens[3] != "real" && tokens[3] != "integer" {
        return Err(format!("unsupported field {:?}", tokens[3]));
    }
    let symmetric = match tokens[4].as_str() {
        "general" => false,
        "symmetric" => true,
        other => return Err(format!("unsupported symmetry {other:?}")),
    };

    let mut body = lines
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('%'));
    let size_line = body.next().ok_or("missing size line")?;
    let sizes: Vec<usize> = size_line
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| format!("bad size token {t:?}")))
        .collect::<std::result::Result<_, _>>()?;
    let num = |t: &str| t.parse::<f64>().map_err(|_| format!("not a number: {t:?}"));

    if coordinate {
        let [rows, cols, nnz] = sizes[..] else {
            return Err(format!("coordinate size line needs 3 entries: {size_line:?}"));
        };
        let mut m = DenseMatrix::zeros(rows, cols);
        let mut count = 0;
        for line in body {
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() != 3 {
                return Err(format!("bad entry line {line:?}"));
            }
            let i: usize = t[0].parse().map_err(|_| format!("bad row index {:?}", t[0]))?;
            let j: usize = t[1].parse().map_err(|_| format!("bad column index {:?}", t[1]))?;
            if i == 0 || j == 0 || i > rows || j > cols {
                return Err(format!("index ({i},{j}) out of range"));
            }
            let v = num(t[2])?;
            m.set(i - 1, j - 1, m.get(i - 1, j - 1) + v);
            if symmetric && i != j {
                m.set(j - 1, i - 1, m.get(j - 1, i - 1) + v);
            }
            count += 1;
        }
        if count != nnz {
            return Err(format!("expected {nnz} entries, found {count}"));
        }
        DenseMatrix::new(rows, cols, m.data().to_vec()).map_err(|e| e.to_string())
    } else {
        let [rows, cols] = sizes[..] else {
            return Err(format!("array size line needs 2 entries: {size_line:?}"));
        };
        let values: Vec<f64> = body.map(num).collect::<std::result::Result<_, _>>()?;
        let mut m = DenseMatrix::zeros(rows, cols);
        // column-major; symmetric stores the lower triangle only
        let mut it = values.into_iter();
        for j in 0..cols {
            let start = if symmetric { j } else { 0 };
            for i in start..rows {
                let v = it.next().ok_or("too few array entries")?;
                m.set(i, j, v);
                if symmetric {
                    m.set(j, i, v);
                }
            }
        }
        if it.next().is_some() {
            return Err("too many array entries".into());
        }
        DenseMatrix::new(rows, cols, m.data().to_vec()).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarketFormat {
    Coordinate,
    Array,
}

pub fn format_matrix_market(m: &DenseMatrix, format: MarketFormat) -> String {
    let mut out = Vec::new();
    match format {
        MarketFormat::Coordinate => {
            let nnz = m.data().iter().filter(|&&v| v != 0.0).count();
            writeln!(out, "%%MatrixMarket matrix coordinate real general").unwrap();
            writeln!(out, "{} {} {}", m.rows(), m.cols(), nnz).unwrap();
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    let v = m.get(i, j);
                    if v != 0.0 {
                        writeln!(out, "{} {} {v:?}", i + 1, j + 1).unwrap();
                    }
                }
            }
        }
        MarketFormat::Array => {
            writeln!(out, "%%MatrixMarket matrix array real general").unwrap();
            writeln!(out, "{} {}", m.rows(), m.cols()).unwrap();
            for j in 0..m.cols() {
                for i in 0..m.rows() {
                    writeln!(out, "{:?}", m.get(i, j)).unwrap();
                }
            }
        }
    }
    String::from_utf8(out).expect("ascii output")
}

pub fn write_matrix_market(path: &Path, m: &DenseMatrix, format: MarketFormat) -> Result<()> {
    fs::write(path, format_matrix_market(m, format)).map_err(|e| io_err(path, e))
}
