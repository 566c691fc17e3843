//! Result tables and their CSV form.
//!
//! Floats are written in shortest round-trip form, so parsing an emitted CSV
//! gives back the identical table. Accuracy and ECE are fractions in `[0, 1]`.
//!
//! Benchmark CSV header:
//!
//! ```text
//! experiment,classes,n_train,n_test,alpha,method,trials,failed,accuracy_mean,accuracy_sd,ece_mean,ece_sd
//! ```
//!
//! `alpha` is `P(Y = 1)` for two-class settings and empty otherwise;
//! `trials` counts successful trials and `failed` the excluded ones; `_sd` is
//! the sample standard deviation over trials.
//!
//! Efficiency CSV header:
//!
//! ```text
//! experiment,n_train,n0,n1,method,trials,failed,mean_variance,mean_mse,mean_bias_sq,cr_bound,variance_ratio
//! ```
//!
//! Variances and MSEs of the estimated log-odds are averaged over the
//! evaluation grid; `cr_bound` is the grid-averaged Cramer-Rao bound and
//! `variance_ratio = mean_variance / cr_bound`.

use std::io::{Read, Write};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::config::Method;
use crate::error::{Error, Result};

/// Aggregate of one method at one setting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub experiment: String,
    pub classes: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub alpha: Option<f64>,
    pub method: Method,
    pub trials: usize,
    pub failed: usize,
    pub accuracy_mean: f64,
    pub accuracy_sd: f64,
    pub ece_mean: f64,
    pub ece_sd: f64,
}

/// Outcome of one method on one trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub experiment: String,
    pub n_train: usize,
    pub alpha: Option<f64>,
    pub trial: usize,
    pub method: Method,
    pub accuracy: Option<f64>,
    pub ece: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BenchmarkTable {
    pub rows: Vec<BenchmarkRow>,
    /// Per-trial outcomes in trial order, one block per row.
    pub trials: Vec<TrialRow>,
}

impl BenchmarkTable {
    pub fn extend(&mut self, other: BenchmarkTable) {
        self.rows.extend(other.rows);
        self.trials.extend(other.trials);
    }

    /// Rows of one experiment and method, in sweep order.
    pub fn select<'a>(&'a self, experiment: &'a str, method: Method) -> impl Iterator<Item = &'a BenchmarkRow> + 'a {
        self.rows
            .iter()
            .filter(move |r| r.experiment == experiment && r.method == method)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_rows(w, &self.rows)
    }

    pub fn write_trials_csv<W: Write>(&self, w: W) -> Result<()> {
        write_rows(w, &self.trials)
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        Ok(BenchmarkTable {
            rows: read_rows(r)?,
            trials: Vec::new(),
        })
    }

    pub fn read_trials_csv<R: Read>(r: R) -> Result<Vec<TrialRow>> {
        read_rows(r)
    }
}

/// Grid-averaged error of one method at one training size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyRow {
    pub experiment: String,
    pub n_train: usize,
    pub n0: usize,
    pub n1: usize,
    pub method: Method,
    pub trials: usize,
    pub failed: usize,
    pub mean_variance: f64,
    pub mean_mse: f64,
    pub mean_bias_sq: f64,
    pub cr_bound: f64,
    pub variance_ratio: f64,
}

/// One log-odds estimate at one grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub experiment: String,
    pub n_train: usize,
    pub trial: usize,
    pub method: Method,
    pub grid_index: usize,
    pub x0: f64,
    pub estimate: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EfficiencyTable {
    pub rows: Vec<EfficiencyRow>,
    pub estimates: Vec<EstimateRow>,
}

impl EfficiencyTable {
    pub fn extend(&mut self, other: EfficiencyTable) {
        self.rows.extend(other.rows);
        self.estimates.extend(other.estimates);
    }

    pub fn select<'a>(&'a self, experiment: &'a str, method: Method) -> impl Iterator<Item = &'a EfficiencyRow> + 'a {
        self.rows
            .iter()
            .filter(move |r| r.experiment == experiment && r.method == method)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_rows(w, &self.rows)
    }

    pub fn write_trials_csv<W: Write>(&self, w: W) -> Result<()> {
        write_rows(w, &self.estimates)
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        Ok(EfficiencyTable {
            rows: read_rows(r)?,
            estimates: Vec::new(),
        })
    }
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        kind => match line {
            Some(line) => Error::Parse {
                line,
                msg: format!("{kind:?}"),
            },
            None => Error::Invalid(format!("csv: {kind:?}")),
        },
    }
}

/// Writes a header (even for zero rows) followed by the rows.
fn write_rows<W: Write, T: Serialize + HeaderNames>(w: W, rows: &[T]) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    wtr.write_record(T::HEADER).map_err(csv_error)?;
    for r in rows {
        wtr.serialize(r).map_err(csv_error)?;
    }
    wtr.flush()?;
    Ok(())
}

fn read_rows<R: Read, T: DeserializeOwned + HeaderNames>(r: R) -> Result<Vec<T>> {
    let mut rdr = csv::Reader::from_reader(r);
    let header = rdr.headers().map_err(csv_error)?.clone();
    if header.iter().ne(T::HEADER.iter().copied()) {
        return Err(Error::Parse {
            line: 1,
            msg: format!("unexpected header, expected {}", T::HEADER.join(",")),
        });
    }
    rdr.deserialize().map(|r| r.map_err(csv_error)).collect()
}

/// Column names, so that a header row is written even for empty tables.
pub trait HeaderNames {
    const HEADER: &'static [&'static str];
}

impl HeaderNames for BenchmarkRow {
    const HEADER: &'static [&'static str] = &[
        "experiment", "classes", "n_train", "n_test", "alpha", "method", "trials", "failed",
        "accuracy_mean", "accuracy_sd", "ece_mean", "ece_sd",
    ];
}

impl HeaderNames for TrialRow {
    const HEADER: &'static [&'static str] = &[
        "experiment", "n_train", "alpha", "trial", "method", "accuracy", "ece", "error",
    ];
}

impl HeaderNames for EfficiencyRow {
    const HEADER: &'static [&'static str] = &[
        "experiment", "n_train", "n0", "n1", "method", "trials", "failed", "mean_variance",
        "mean_mse", "mean_bias_sq", "cr_bound", "variance_ratio",
    ];
}

impl HeaderNames for EstimateRow {
    const HEADER: &'static [&'static str] = &[
        "experiment", "n_train", "trial", "method", "grid_index", "x0", "estimate",
    ];
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(method: Method, alpha: Option<f64>) -> BenchmarkRow {
        BenchmarkRow {
            experiment: "weibull".into(),
            classes: 2,
            n_train: 1000,
            n_test: 2000,
            alpha,
            method,
            trials: 100,
            failed: 0,
            accuracy_mean: 0.8721,
            accuracy_sd: 0.1 + 0.2,
            ece_mean: 1.0 / 3.0,
            ece_sd: 1e-300,
        }
    }

    #[test]
    fn empty_table_is_header_only() {
        let mut buf = Vec::new();
        BenchmarkTable::default().write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), BenchmarkRow::HEADER.join(",") + "\n");
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let table = BenchmarkTable {
            rows: vec![row(Method::Efda, Some(0.7)), row(Method::Lr, None)],
            trials: Vec::new(),
        };
        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        let back = BenchmarkTable::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, table);
    }

    #[test]
    fn header_mismatch_is_reported() {
        let err = BenchmarkTable::read_csv("a,b\n1,2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }
}
