//! JSON records and CSV tables.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::{Serialize, Serializer};
use umean::{ConfidenceInterval, ScanResult, ScanRow};

use crate::error::{CliError, Result};

/// A float that serializes non-finite values as the strings `"inf"`,
/// `"-inf"` and `"NaN"` so JSON output never loses them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str(&self.0.to_string())
        }
    }
}

#[derive(Debug, Serialize)]
pub struct IntervalRecord {
    pub lower: Num,
    pub upper: Num,
    pub clamped_low: bool,
    pub clamped_high: bool,
}

impl From<&ConfidenceInterval> for IntervalRecord {
    fn from(ci: &ConfidenceInterval) -> Self {
        Self {
            lower: Num(ci.lower),
            upper: Num(ci.upper),
            clamped_low: ci.clamped_low,
            clamped_high: ci.clamped_high,
        }
    }
}

pub fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|source| {
            CliError::Io {
                path: p.to_path_buf(),
                source,
            }
        })?)),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn io_err(path: Option<&Path>) -> impl Fn(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.map_or_else(|| "<stdout>".into(), Path::to_path_buf),
        source,
    }
}

pub fn write_json(value: &impl Serialize, path: Option<&Path>) -> Result<()> {
    let mut out = open_out(path)?;
    serde_json::to_writer_pretty(&mut out, value)
        .map_err(|e| CliError::input(format!("JSON serialization failed: {e}")))?;
    writeln!(out).and_then(|_| out.flush()).map_err(io_err(path))
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub const SCAN_HEADER: [&str; 5] = ["b", "u_mean", "variance", "ci_lo", "ci_hi"];

/// One named column of a curve table.
pub type Column = (&'static str, fn(&ScanRow) -> Option<f64>);

pub const B: Column = ("b", |r| Some(r.b));
pub const U_MEAN: Column = ("u_mean", |r| Some(r.u_mean));
pub const VARIANCE: Column = ("variance", |r| Some(r.variance));
pub const CI_LO: Column = ("ci_lo", |r| r.ci_lo);
pub const CI_HI: Column = ("ci_hi", |r| r.ci_hi);
pub const CI_WIDTH: Column = ("ci_width", |r| Some(r.ci_hi? - r.ci_lo?));
pub const TRANSFORMED_MEAN: Column = ("transformed_mean", |r| Some(r.transformed_mean));
pub const TRANSFORMED_CI_LO: Column = ("transformed_ci_lo", |r| r.transformed_ci_lo);
pub const TRANSFORMED_CI_HI: Column = ("transformed_ci_hi", |r| r.transformed_ci_hi);
pub const U_MEAN_SE: Column = ("u_mean_se", |r| r.u_mean_se);
pub const VARIANCE_SE: Column = ("variance_se", |r| r.variance_se);
pub const MEAN_OF_U_MEANS: Column = ("mean_of_u_means", |r| r.mean_of_u_means);

pub const SCAN_COLUMNS: [Column; 5] = [B, U_MEAN, VARIANCE, CI_LO, CI_HI];

pub fn write_columns(scan: &ScanResult, columns: &[Column], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let fail = |e: csv::Error| CliError::input(format!("CSV write failed: {e}"));
    w.write_record(columns.iter().map(|c| c.0)).map_err(fail)?;
    for row in &scan.rows {
        w.write_record(columns.iter().map(|c| cell((c.1)(row))))
            .map_err(fail)?;
    }
    w.flush().map_err(|e| fail(e.into()))
}

/// The standard `b,u_mean,variance,ci_lo,ci_hi` table. Missing intervals are
/// left empty.
pub fn write_scan_csv(scan: &ScanResult, out: impl Write) -> Result<()> {
    write_columns(scan, &SCAN_COLUMNS, out)
}
