//! Experiment reports: JSON with a config echo, and tidy CSV tables.

use priorlab::certify::Outcome;
use priorlab::rational::{self, Rational};
use priorlab::ValueResult;
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::config::Config;
use crate::RunError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub outcome: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, outcome: Outcome, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            outcome: outcome.as_str().to_string(),
            holds: outcome.holds(),
            detail: detail.into(),
        }
    }
}

/// One tidy row: a quantity measured at some point of the experiment.
/// The truncation bound is always present (0 for exact values).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub point: String,
    pub quantity: String,
    pub exact: String,
    pub decimal: String,
    pub bound: String,
    pub bound_decimal: String,
}

impl Row {
    pub fn value(point: impl Into<String>, quantity: impl Into<String>, v: &ValueResult) -> Self {
        Row {
            point: point.into(),
            quantity: quantity.into(),
            exact: v.value.to_string(),
            decimal: rational::to_decimal(&v.value),
            bound: v.truncation_bound.to_string(),
            bound_decimal: rational::to_decimal(&v.truncation_bound),
        }
    }

    pub fn exact(point: impl Into<String>, quantity: impl Into<String>, x: &Rational) -> Self {
        Row::value(point, quantity, &ValueResult::exact(x.clone()))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub experiment: &'static str,
    pub status: &'static str,
    pub horizon: usize,
    pub discount: String,
    pub checks: Vec<Check>,
    pub rows: Vec<Row>,
    pub details: serde_json::Value,
    pub config: Config,
    /// Excluded from determinism comparisons.
    pub timing: Timing,
    /// Extra CSV tables, written next to the main one as `<stem>_<name>.csv`.
    #[serde(skip)]
    pub tables: Vec<Table>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    /// The report as JSON without the timing field, for comparisons.
    pub fn canonical_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("timing");
        }
        v
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), RunError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["experiment", "point", "quantity", "exact", "decimal", "bound", "bound_decimal"])
            .map_err(io_err)?;
        for r in &self.rows {
            w.write_record([
                self.experiment,
                &r.point,
                &r.quantity,
                &r.exact,
                &r.decimal,
                &r.bound,
                &r.bound_decimal,
            ])
            .map_err(io_err)?;
        }
        w.flush().map_err(|e| RunError::Io(e.to_string()))
    }

    /// Writes `<stem>.json` and/or `<stem>.csv` (plus extra tables) into
    /// `dir`, returning the paths written.
    pub fn write_files(&self, dir: &Path, stem: &str, json: bool, csv: bool) -> Result<Vec<PathBuf>, RunError> {
        std::fs::create_dir_all(dir).map_err(|e| RunError::Io(format!("{}: {e}", dir.display())))?;
        let mut written = Vec::new();
        let create = |p: &Path| {
            std::fs::File::create(p).map_err(|e| RunError::Io(format!("{}: {e}", p.display())))
        };
        if json {
            let p = dir.join(format!("{stem}.json"));
            let mut f = create(&p)?;
            writeln!(f, "{}", self.to_json()).map_err(|e| RunError::Io(e.to_string()))?;
            written.push(p);
        }
        if csv {
            let p = dir.join(format!("{stem}.csv"));
            self.write_csv(create(&p)?)?;
            written.push(p);
            for t in &self.tables {
                let p = dir.join(format!("{stem}_{}.csv", t.name));
                let mut w = csv::Writer::from_writer(create(&p)?);
                w.write_record(&t.header).map_err(io_err)?;
                for r in &t.rows {
                    w.write_record(r).map_err(io_err)?;
                }
                w.flush().map_err(|e| RunError::Io(e.to_string()))?;
                written.push(p);
            }
        }
        Ok(written)
    }
}

fn io_err(e: csv::Error) -> RunError {
    RunError::Io(e.to_string())
}
