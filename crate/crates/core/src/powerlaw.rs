//! Least-squares power-law fits `y ≈ e^b · L^m` on log-log data.

use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// RMS of the log-log residual above which data is reported as not a power law.
pub const POWER_LAW_RMS: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub rows: usize,
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of `ln y` about the fitted line.
    pub rms: f64,
    pub power_law: bool,
}

pub fn fit_power_law(lengths: &[f64], values: &[f64]) -> Result<PowerLawFit> {
    if lengths.len() != values.len() {
        return Err(Error::InvalidArgument(format!(
            "{} lengths but {} values",
            lengths.len(),
            values.len()
        )));
    }
    if lengths.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "a fit needs at least 3 rows, got {}",
            lengths.len()
        )));
    }
    for (name, data) in [("L", lengths), ("value", values)] {
        if let Some(v) = data.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidArgument(format!(
                "{name} column contains non-positive value {v:e}; its logarithm is undefined"
            )));
        }
    }
    let x: Vec<f64> = lengths.iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|xi| (xi - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::InvalidArgument("all L values coincide".into()));
    }
    let sxy: f64 = x.iter().zip(&y).map(|(xi, yi)| (xi - mx) * (yi - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (x
        .iter()
        .zip(&y)
        .map(|(xi, yi)| (yi - intercept - slope * xi).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(PowerLawFit {
        rows: x.len(),
        slope,
        intercept,
        rms,
        power_law: rms <= POWER_LAW_RMS,
    })
}

/// Read `(L, column)` pairs from a sweep CSV, keeping rows with
/// `l_min ≤ L ≤ l_max`.
pub fn read_columns<R: Read>(
    reader: R,
    column: &str,
    l_min: Option<f64>,
    l_max: Option<f64>,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr.headers()?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::InvalidArgument(format!("CSV has no column `{name}`")))
    };
    let li = find("L")?;
    let ci = find(column)?;
    let parse = |field: &str, row: usize, name: &str| -> Result<f64> {
        field.trim().parse().map_err(|_| {
            Error::InvalidArgument(format!("row {row}: `{name}` value {field:?} is not a number"))
        })
    };
    let (mut ls, mut ys) = (Vec::new(), Vec::new());
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        let l = parse(&record[li], row + 1, "L")?;
        if l_min.is_some_and(|m| l < m) || l_max.is_some_and(|m| l > m) {
            continue;
        }
        ls.push(l);
        ys.push(parse(&record[ci], row + 1, column)?);
    }
    Ok((ls, ys))
}
