//! Strict two-column CSV input.
//!
//! The format is deliberately minimal so the data contract stays
//! bit-exact: UTF-8, a mandatory `x,y` header, comma-separated numeric
//! rows with `.` as the decimal point, blank lines ignored. Anything
//! richer belongs to upstream tooling.

use std::path::Path;

use crate::CliError;

#[derive(Debug)]
pub struct XyTable {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// Rows were not sorted by `x` and have been reordered.
    pub reordered: bool,
    /// The (sorted) design contains repeated `x` values.
    pub duplicates: bool,
}

/// Minimum number of observations the test accepts.
const MIN_ROWS: usize = 4;

pub fn read_xy_csv(path: &Path) -> Result<XyTable, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let mut pairs: Vec<(f64, f64)> = Vec::new();
    let mut saw_header = false;
    for (number, raw) in text.lines().enumerate() {
        let number = number + 1;
        let line = raw
            .strip_prefix('\u{feff}')
            .unwrap_or(raw)
            .trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if !saw_header {
            if line != "x,y" {
                return Err(CliError::Data(format!(
                    "line {number}: expected header 'x,y', found '{line}'"
                )));
            }
            saw_header = true;
            continue;
        }
        let mut fields = line.split(',');
        let (Some(rx), Some(ry), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(CliError::Data(format!(
                "line {number}: expected exactly two comma-separated values"
            )));
        };
        let x = parse_cell(rx, "x", number)?;
        let y = parse_cell(ry, "y", number)?;
        pairs.push((x, y));
    }
    if !saw_header {
        return Err(CliError::Data(format!(
            "{}: empty file; expected header 'x,y'",
            path.display()
        )));
    }
    if pairs.len() < MIN_ROWS {
        return Err(CliError::Data(format!(
            "sample too small (minimum {MIN_ROWS})"
        )));
    }
    let reordered = pairs.windows(2).any(|w| w[0].0 > w[1].0);
    if reordered {
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite by construction"));
    }
    let duplicates = pairs.windows(2).any(|w| w[0].0 == w[1].0);
    let (x, y) = pairs.into_iter().unzip();
    Ok(XyTable {
        x,
        y,
        reordered,
        duplicates,
    })
}

fn parse_cell(raw: &str, column: &str, number: usize) -> Result<f64, CliError> {
    let value: f64 = raw.trim().parse().map_err(|_| {
        CliError::Data(format!(
            "line {number}: could not parse '{}' as a number in column {column}",
            raw.trim()
        ))
    })?;
    if !value.is_finite() {
        return Err(CliError::Data(format!(
            "line {number}: non-finite value '{}' in column {column}",
            raw.trim()
        )));
    }
    Ok(value)
}
