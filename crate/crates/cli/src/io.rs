//! Text formats for datasets, centres and scatter matrices.
//!
//! A dataset has one observation per line with fields separated by commas
//! and/or whitespace. Blank lines and lines starting with `#` are skipped, and
//! a first data line that does not parse as numbers is taken as a header.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use scatter_depth::Matrix;

use crate::error::{CliError, CliResult};

fn fields(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c == ',' || c.is_whitespace()).filter(|f| !f.is_empty())
}

fn parse_row(line: &str, lineno: usize) -> CliResult<Vec<f64>> {
    fields(line)
        .map(|f| {
            f.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Parse { line: lineno, message: format!("`{f}` is not a finite number") })
        })
        .collect()
}

/// Parses dataset text. Line numbers in errors are 1-based.
pub fn parse_dataset(text: &str) -> CliResult<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut seen_data_line = false;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = match parse_row(line, lineno) {
            Ok(r) => r,
            Err(_) if !seen_data_line && fields(line).any(|f| f.parse::<f64>().is_err()) => {
                seen_data_line = true;
                continue;
            }
            Err(e) => return Err(e),
        };
        seen_data_line = true;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(CliError::RaggedRows { line: lineno, expected: first.len(), found: row.len() });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::EmptyDataset);
    }
    Ok(rows)
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub fn read_dataset(path: &Path) -> CliResult<Vec<Vec<f64>>> {
    parse_dataset(&read_text(path)?)
}

/// Comma-separated rows with shortest round-trip float formatting.
pub fn format_dataset(rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for row in rows {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            write!(out, "{v:?}").expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

pub fn write_dataset(path: &Path, rows: &[Vec<f64>]) -> CliResult<()> {
    fs::write(path, format_dataset(rows)).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Inline vector such as `1,2.5,-3` or `1 2.5 -3`.
pub fn parse_inline_vector(spec: &str) -> CliResult<Vec<f64>> {
    let v = parse_row(spec, 1).map_err(|_| CliError::Validation(format!("cannot parse vector `{spec}`")))?;
    if v.is_empty() {
        return Err(CliError::Validation("empty vector".into()));
    }
    Ok(v)
}

/// Inline matrix with rows separated by `;`, such as `2,1;1,2`.
pub fn parse_inline_matrix(spec: &str) -> CliResult<Matrix> {
    let rows = spec
        .split(';')
        .map(parse_inline_vector)
        .collect::<CliResult<Vec<_>>>()?;
    Matrix::from_rows(&rows).map_err(|e| CliError::Validation(format!("matrix `{spec}`: {e}")))
}

/// Matrix file: one row per line, in the dataset format.
pub fn read_matrix(path: &Path) -> CliResult<Matrix> {
    let rows = read_dataset(path)?;
    Matrix::from_rows(&rows).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

/// Vector file: either a single row or a single column.
pub fn read_vector(path: &Path) -> CliResult<Vec<f64>> {
    let rows = read_dataset(path)?;
    match (rows.len(), rows[0].len()) {
        (1, _) => Ok(rows.into_iter().next().expect("one row")),
        (_, 1) => Ok(rows.into_iter().map(|r| r[0]).collect()),
        (r, c) => Err(CliError::Validation(format!("{}: expected a vector, found a {r}x{c} table", path.display()))),
    }
}
