//! Parameter sweeps over the interval length.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bounds::{self, names, BoundReport, TolerancePolicy};
use crate::error::{Error, Result};
use crate::fdsolver::{self, SpectralResult};
use crate::parallel::{map_ordered, Execution};
use crate::potentials::PotentialSpec;

pub const CSV_HEADER: [&str; 12] = [
    "L",
    "lambda0",
    "lambda1",
    "gap",
    "inf_phi0",
    "sup_phi0",
    "theorem_bound",
    "kirsch_bound",
    "error_estimate",
    "checks_passed",
    "checks_total",
    "status",
];

/// Fixed float format for all CSV output: 17 significant digits.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Lengths {
    List(Vec<f64>),
    LogSpaced { min: f64, max: f64, count: usize },
}

impl Lengths {
    /// The lengths in sweep order. Log-spaced endpoints are exact.
    pub fn values(&self) -> Result<Vec<f64>> {
        let values = match self {
            Lengths::List(v) => v.clone(),
            &Lengths::LogSpaced { min, max, count } => {
                if !(min > 0.0 && max > min && max.is_finite()) {
                    return Err(Error::InvalidArgument(format!(
                        "log-spaced lengths need 0 < min < max, got min = {min}, max = {max}"
                    )));
                }
                if count < 2 {
                    return Err(Error::InvalidArgument(format!(
                        "log-spaced lengths need count >= 2, got {count}"
                    )));
                }
                let (a, b) = (min.ln(), max.ln());
                (0..count)
                    .map(|k| match k {
                        0 => min,
                        k if k == count - 1 => max,
                        k => (a + (b - a) * k as f64 / (count - 1) as f64).exp(),
                    })
                    .collect()
            }
        };
        if values.is_empty() {
            return Err(Error::InvalidArgument("sweep needs at least one length".into()));
        }
        if let Some(v) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidLength(*v));
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("lengths must be strictly increasing".into()));
        }
        Ok(values)
    }
}

fn default_cells_per_length() -> f64 {
    fdsolver::DEFAULT_CELLS_PER_LENGTH
}
fn default_min_cells() -> usize {
    fdsolver::DEFAULT_BASE_CELLS
}
fn default_levels() -> usize {
    fdsolver::DEFAULT_LEVELS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub potential: PotentialSpec,
    #[serde(alias = "L_values")]
    pub lengths: Lengths,
    /// Base cells per unit length; the base grid is `max(min_cells, ceil(cells_per_length · L))`.
    #[serde(default = "default_cells_per_length")]
    pub cells_per_length: f64,
    #[serde(default = "default_min_cells")]
    pub min_cells: usize,
    #[serde(default = "default_levels")]
    pub levels: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plot_script: Option<PathBuf>,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: SweepConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.potential.validate()?;
        self.lengths.values()?;
        if !(self.cells_per_length > 0.0 && self.cells_per_length.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "cells_per_length must be positive, got {}",
                self.cells_per_length
            )));
        }
        if self.min_cells < fdsolver::MIN_BASE_CELLS {
            return Err(Error::InvalidGrid(format!(
                "min_cells must be at least {}, got {}",
                fdsolver::MIN_BASE_CELLS,
                self.min_cells
            )));
        }
        if !(2..=4).contains(&self.levels) {
            return Err(Error::InvalidArgument(format!(
                "levels must be 2, 3 or 4, got {}",
                self.levels
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    Violation,
    Error,
}

impl RowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::Violation => "violation",
            RowStatus::Error => "error",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepValues {
    pub lambda0: f64,
    pub lambda1: f64,
    pub gap: f64,
    pub inf_phi0: f64,
    pub sup_phi0: f64,
    pub theorem_bound: f64,
    pub kirsch_bound: f64,
    pub error_estimate: f64,
}

/// One sweep row. `values` is absent when the solve failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub length: f64,
    pub values: Option<SweepValues>,
    pub checks_passed: usize,
    pub checks_total: usize,
    pub status: RowStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl SweepRecord {
    fn from_outcome(length: f64, outcome: Result<(SpectralResult, BoundReport)>) -> Self {
        match outcome {
            Ok((r, report)) => {
                let bound = |name| {
                    report
                        .check(name)
                        .and_then(|c| c.bound_value)
                        .unwrap_or(f64::NAN)
                };
                SweepRecord {
                    length,
                    values: Some(SweepValues {
                        lambda0: r.lambda0,
                        lambda1: r.lambda1,
                        gap: r.gap,
                        inf_phi0: r.inf_phi0,
                        sup_phi0: r.sup_phi0,
                        theorem_bound: bound(names::GAP_THEOREM),
                        kirsch_bound: bound(names::GAP_KIRSCH),
                        error_estimate: r.error_estimate.gap,
                    }),
                    checks_passed: report.passed(),
                    checks_total: report.applicable(),
                    status: if report.all_hold() {
                        RowStatus::Ok
                    } else {
                        RowStatus::Violation
                    },
                    message: None,
                }
            }
            Err(e) => SweepRecord {
                length,
                values: None,
                checks_passed: 0,
                checks_total: 0,
                status: RowStatus::Error,
                message: Some(e.to_string()),
            },
        }
    }

    fn csv_fields(&self) -> Vec<String> {
        let mut out = vec![format_float(self.length)];
        match &self.values {
            Some(v) => out.extend(
                [
                    v.lambda0,
                    v.lambda1,
                    v.gap,
                    v.inf_phi0,
                    v.sup_phi0,
                    v.theorem_bound,
                    v.kirsch_bound,
                    v.error_estimate,
                ]
                .map(format_float),
            ),
            None => out.extend(std::iter::repeat_n(String::new(), 8)),
        }
        out.push(self.checks_passed.to_string());
        out.push(self.checks_total.to_string());
        out.push(self.status.as_str().to_string());
        out
    }
}

/// Solve one instance and verify every inequality against it.
pub fn solve_and_verify(
    p: &PotentialSpec,
    length: f64,
    base_cells: usize,
    levels: usize,
    policy: &TolerancePolicy,
) -> Result<(SpectralResult, BoundReport)> {
    let result = fdsolver::solve_extrapolated(p, length, base_cells, levels)?;
    let report = bounds::verify(p, length, &result, policy)?;
    Ok((result, report))
}

/// A single `(potential, L)` instance for [`verify_batch`].
#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub potential: PotentialSpec,
    pub length: f64,
    pub base_cells: usize,
    pub levels: usize,
}

impl Case {
    /// Default grid scaling: `max(256, ceil(64 L))` base cells, three levels.
    pub fn new(potential: PotentialSpec, length: f64) -> Self {
        Case {
            potential,
            length,
            base_cells: fdsolver::default_base_cells(length),
            levels: fdsolver::DEFAULT_LEVELS,
        }
    }
}

/// Solve and verify independent cases, returning outcomes in input order.
pub fn verify_batch(
    cases: &[Case],
    policy: &TolerancePolicy,
    exec: Execution,
) -> Vec<Result<(SpectralResult, BoundReport)>> {
    map_ordered(cases, exec, |c| {
        solve_and_verify(&c.potential, c.length, c.base_cells, c.levels, policy)
            .map(|(r, report)| (r.without_profile(), report))
    })
}

pub fn run_sweep(config: &SweepConfig, exec: Execution) -> Result<Vec<SweepRecord>> {
    config.validate()?;
    let lengths = config.lengths.values()?;
    let policy = TolerancePolicy::default();
    Ok(map_ordered(&lengths, exec, |&length| {
        let cells = fdsolver::base_cells_for(length, config.cells_per_length, config.min_cells);
        let outcome = solve_and_verify(&config.potential, length, cells, config.levels, &policy);
        if let Err(e) = &outcome {
            log::warn!("L = {length}: {e}");
        }
        SweepRecord::from_outcome(length, outcome)
    }))
}

pub fn write_csv<W: Write>(records: &[SweepRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(r.csv_fields())?;
    }
    w.flush()?;
    Ok(())
}

/// Gnuplot script drawing gap, Kirsch bound and theorem bound against `L`
/// on log-log axes from the CSV at `csv_path`.
pub fn plot_script(csv_path: &Path, potential: &PotentialSpec) -> String {
    let path = csv_path.display().to_string().replace('\'', "''");
    let mut s = String::new();
    let _ = writeln!(s, "# gnuplot script: spectral gap sweep for a `{}` potential", potential.kind());
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "set logscale xy");
    let _ = writeln!(s, "set xlabel 'L'");
    let _ = writeln!(s, "set ylabel 'energy'");
    let _ = writeln!(s, "set format y '%.0e'");
    let _ = writeln!(s, "set grid");
    let _ = writeln!(s, "file = '{path}'");
    let _ = writeln!(
        s,
        "plot file using 1:4 with linespoints title 'gap', \\\n     \
         file using 1:8 with lines dashtype 2 title 'ratio bound', \\\n     \
         file using 1:7 with lines dashtype 3 title 'theorem bound'"
    );
    s
}
