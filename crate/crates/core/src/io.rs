//! File formats: CSV loss samples and matrices, JSON specs.
//!
//! CSV files may start with a header row. A first row that does not parse
//! entirely as numbers is taken to be a header and skipped.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::empirical::LossSample;
use crate::error::{Result, RiskError};

/// Numeric rows of a CSV source, skipping a non-numeric first row.
pub fn parse_numeric_csv<R: Read>(reader: R) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(row) => {
                if let Some(bad) = row.iter().find(|v| !v.is_finite()) {
                    return Err(RiskError::invalid(format!(
                        "non-finite value {bad} on line {}",
                        line + 1
                    )));
                }
                rows.push(row);
            }
            Err(_) if line == 0 => continue,
            Err(_) => {
                return Err(RiskError::invalid(format!(
                    "non-numeric field on line {}",
                    line + 1
                )))
            }
        }
    }
    Ok(rows)
}

/// A rectangular matrix, one row per datum.
pub fn parse_matrix_csv<R: Read>(reader: R) -> Result<Vec<Vec<f64>>> {
    let rows = parse_numeric_csv(reader)?;
    let width = rows.first().map(Vec::len).unwrap_or(0);
    if width == 0 {
        return Err(RiskError::invalid("no data rows"));
    }
    if let Some(i) = rows.iter().position(|r| r.len() != width) {
        return Err(RiskError::invalid(format!(
            "row {} has {} columns, expected {width}",
            i + 1,
            rows[i].len()
        )));
    }
    Ok(rows)
}

/// One column of values (equally likely) or two columns of values and
/// probabilities.
pub fn parse_sample_csv<R: Read>(reader: R) -> Result<LossSample> {
    let rows = parse_matrix_csv(reader)?;
    match rows[0].len() {
        1 => LossSample::uniform(rows.into_iter().map(|r| r[0]).collect::<Vec<_>>()),
        2 => {
            let (values, weights): (Vec<f64>, Vec<f64>) =
                rows.into_iter().map(|r| (r[0], r[1])).unzip();
            LossSample::weighted(values, weights)
        }
        w => Err(RiskError::invalid(format!(
            "sample CSV needs one or two columns, found {w}"
        ))),
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| RiskError::File {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_sample(path: impl AsRef<Path>) -> Result<LossSample> {
    parse_sample_csv(open(path.as_ref())?)
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<Vec<Vec<f64>>> {
    parse_matrix_csv(open(path.as_ref())?)
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let mut text = String::new();
    open(path.as_ref())?.read_to_string(&mut text)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Writes `(index, value)` rows under the given header.
pub fn write_series(path: impl AsRef<Path>, header: [&str; 2], values: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for (i, v) in values.iter().enumerate() {
        w.write_record([i.to_string(), v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
