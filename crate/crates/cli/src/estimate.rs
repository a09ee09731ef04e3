//! Regular-variation index estimates of `H` and `W` from a samples file.
//! Both transforms are exact finite sums for the empirical law.

use std::fmt;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use httool_core::models::EmpiricalData;

use crate::config::{load_samples, GridSpec};
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Ok,
    /// Fewer than `sqrt(n)` samples exceed `t x`.
    SparseTail,
    /// `t x` lies beyond the largest sample.
    BeyondMaxSample,
    /// `x` lies below the smallest sample, so `H(x) = 0`.
    BelowMinSample,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowStatus::Ok => "ok",
            RowStatus::SparseTail => "sparse_tail",
            RowStatus::BeyondMaxSample => "beyond_max_sample",
            RowStatus::BelowMinSample => "below_min_sample",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateRow {
    pub x: f64,
    pub h_slope: f64,
    pub w_slope: f64,
    pub status: RowStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateSummary {
    pub n: usize,
    pub rows: Vec<EstimateRow>,
    /// Slopes at the last `ok` row, if any.
    pub h_index: Option<f64>,
    pub w_index: Option<f64>,
    pub file: PathBuf,
}

impl EstimateSummary {
    pub fn render(&self) -> String {
        let mut out = format!("samples: {}\n", self.n);
        match (self.h_index, self.w_index) {
            (Some(h), Some(w)) => {
                let _ = writeln!(out, "H index estimate: {h}");
                let _ = writeln!(out, "W index estimate: {w}");
            }
            _ => out.push_str("warning: no grid point has enough tail samples for an estimate\n"),
        }
        let skipped = self.rows.iter().filter(|r| r.status != RowStatus::Ok).count();
        if skipped > 0 {
            let _ = writeln!(out, "warning: {skipped} grid rows flagged (see status column)");
        }
        let _ = writeln!(out, "wrote {}", self.file.display());
        out
    }
}

fn slope(f: impl Fn(f64) -> f64, x: f64, t: f64) -> f64 {
    (f(t * x) / f(x)).ln() / t.ln()
}

/// Per-grid-point log-ratio slopes of the empirical `H` and `W`.
pub fn estimate_rows(data: &EmpiricalData, alpha: f64, t: f64, grid: &[f64]) -> Vec<EstimateRow> {
    let n = data.len();
    let min_tail = (n as f64).sqrt();
    let smallest = data.samples()[0];
    grid.iter()
        .map(|&x| {
            let tail_count = n - data.count_at_most(t * x);
            let status = if x < smallest {
                RowStatus::BelowMinSample
            } else if t * x > data.max() {
                RowStatus::BeyondMaxSample
            } else if (tail_count as f64) < min_tail {
                RowStatus::SparseTail
            } else {
                RowStatus::Ok
            };
            EstimateRow {
                x,
                h_slope: slope(|y| data.truncated_moment(alpha, y), x, t),
                w_slope: slope(|y| data.tail_integral(alpha, y), x, t),
                status,
            }
        })
        .collect()
}

pub fn render_csv(rows: &[EstimateRow]) -> String {
    let mut out = String::from("x,h_slope,w_slope,status\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.x, r.h_slope, r.w_slope, r.status);
    }
    out
}

/// Reads `samples_path`, writes `estimate.csv` into `output_dir`.
pub fn estimate_from_data(
    samples_path: &Path,
    alpha: f64,
    t: f64,
    grid: &GridSpec,
    output_dir: &Path,
) -> Result<EstimateSummary, CliError> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(CliError::config("alpha", format!("must be positive, got {alpha}")));
    }
    if !(t > 1.0 && t.is_finite()) {
        return Err(CliError::config("t", format!("must exceed 1, got {t}")));
    }
    let data = EmpiricalData::new(load_samples(samples_path)?).map_err(|e| CliError::Data(e.to_string()))?;
    let rows = estimate_rows(&data, alpha, t, &grid.points());
    let last_ok = rows.iter().rev().find(|r| r.status == RowStatus::Ok);

    std::fs::create_dir_all(output_dir).map_err(|e| CliError::io(output_dir, e))?;
    let file = output_dir.join("estimate.csv");
    std::fs::write(&file, render_csv(&rows)).map_err(|e| CliError::io(&file, e))?;
    Ok(EstimateSummary {
        n: data.len(),
        h_index: last_ok.map(|r| r.h_slope),
        w_index: last_ok.map(|r| r.w_slope),
        rows,
        file,
    })
}
