//! The diagnostic CSV format: header `x,value,theoretical_limit,rel_error`,
//! one row per grid point, floats in shortest round-trip form.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::CliError;

pub const HEADER: &str = "x,value,theoretical_limit,rel_error";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub x: f64,
    pub value: f64,
    pub theoretical_limit: f64,
    pub rel_error: f64,
}

pub fn render(rows: &[Row]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.x, r.value, r.theoretical_limit, r.rel_error);
    }
    out
}

pub fn write(path: &Path, rows: &[Row]) -> Result<(), CliError> {
    std::fs::write(path, render(rows)).map_err(|e| CliError::io(path, e))
}

pub fn parse(text: &str) -> Result<Vec<Row>, CliError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(HEADER) => {}
        other => return Err(CliError::Data(format!("unexpected CSV header {other:?}"))),
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let fields: Vec<f64> = line
                .split(',')
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|_| CliError::Data(format!("CSV line {}: `{line}`", i + 2)))?;
            let [x, value, theoretical_limit, rel_error] = fields[..] else {
                return Err(CliError::Data(format!("CSV line {}: expected 4 fields", i + 2)));
            };
            Ok(Row {
                x,
                value,
                theoretical_limit,
                rel_error,
            })
        })
        .collect()
}
