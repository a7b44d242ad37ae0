//! Single-column CSV ingestion.
//!
//! Lines starting with `#` before the data are kept as a provenance note. The
//! first record is treated as a header when it does not parse as a number.
//! Row numbers in error messages count data rows from 1.

use std::fs;
use std::io::Write;
use std::path::Path;

use umean::SampleVector;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub column: Option<String>,
    pub values: SampleVector,
    pub provenance: Option<String>,
}

pub fn read_dataset(path: &Path) -> Result<Dataset> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_dataset(&text).map_err(|e| match e {
        CliError::Input(msg) => CliError::Input(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse_dataset(text: &str) -> Result<Dataset> {
    let mut notes = Vec::new();
    let mut body_start = 0;
    for line in text.split_inclusive('\n') {
        match line.trim_start().strip_prefix('#') {
            Some(note) => {
                notes.push(note.trim().to_string());
                body_start += line.len();
            }
            None if line.trim().is_empty() => body_start += line.len(),
            None => break,
        }
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(&text.as_bytes()[body_start..]);

    let mut column = None;
    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::input(format!("malformed CSV: {e}")))?;
        if record.len() != 1 {
            return Err(CliError::input(format!(
                "expected a single column, found {} fields in record {}",
                record.len(),
                i + 1
            )));
        }
        let field = &record[0];
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(v) => {
                return Err(CliError::input(format!(
                    "row {}: value {v} is not finite",
                    values.len() + 1
                )))
            }
            Err(_) if i == 0 => column = Some(field.to_string()),
            Err(_) => {
                return Err(CliError::input(format!(
                    "row {}: cannot parse {field:?} as a number",
                    values.len() + 1
                )))
            }
        }
    }
    if values.is_empty() {
        return Err(CliError::input("no data rows"));
    }
    Ok(Dataset {
        column,
        values: SampleVector::new(values)?,
        provenance: (!notes.is_empty()).then(|| notes.join("\n")),
    })
}

/// Writes the dataset back in the format [`parse_dataset`] reads.
pub fn write_dataset(ds: &Dataset, out: &mut impl Write) -> std::io::Result<()> {
    if let Some(p) = &ds.provenance {
        for line in p.lines() {
            writeln!(out, "# {line}")?;
        }
    }
    if let Some(c) = &ds.column {
        writeln!(out, "{c}")?;
    }
    for v in ds.values.iter() {
        writeln!(out, "{v}")?;
    }
    Ok(())
}
