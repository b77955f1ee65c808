use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::config::Suite;
use crate::CliError;

/// One verification row: a computed value against its reference.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub test_id: String,
    pub d: usize,
    pub hbar: f64,
    pub lambda: f64,
    /// Degree, radius or point, as text.
    pub index: String,
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub rhs_re: f64,
    pub rhs_im: f64,
    pub rel_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Where a row's numbers come from.
pub struct RowSpec<'a> {
    pub test_id: &'a str,
    pub d: usize,
    pub hbar: f64,
    pub lambda: f64,
    pub index: String,
    pub tolerance: f64,
}

impl RowSpec<'_> {
    /// Row with error |lhs - rhs| / |rhs| (absolute when |rhs| = 0).
    pub fn compare(self, lhs: Complex64, rhs: Complex64) -> Row {
        let scale = rhs.norm();
        let err = if scale > 0.0 { (lhs - rhs).norm() / scale } else { (lhs - rhs).norm() };
        self.with_error(lhs, rhs, err)
    }

    /// Row with a precomputed error.
    pub fn with_error(self, lhs: Complex64, rhs: Complex64, err: f64) -> Row {
        Row {
            test_id: self.test_id.to_string(),
            d: self.d,
            hbar: self.hbar,
            lambda: self.lambda,
            index: self.index,
            lhs_re: lhs.re,
            lhs_im: lhs.im,
            rhs_re: rhs.re,
            rhs_im: rhs.im,
            rel_error: err,
            tolerance: self.tolerance,
            pass: err <= self.tolerance,
        }
    }

    /// Row for a computation that failed outright.
    pub fn failed(self, what: impl std::fmt::Display) -> Row {
        let nan = Complex64::new(f64::NAN, f64::NAN);
        let mut row = self.with_error(nan, nan, f64::NAN);
        row.index = format!("{} ({what})", row.index);
        row
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub suite: String,
    pub rows: usize,
    pub passed: usize,
    pub failed: usize,
    pub max_rel_error: f64,
}

impl SuiteSummary {
    pub fn of(suite: Suite, rows: &[Row]) -> Self {
        let passed = rows.iter().filter(|r| r.pass).count();
        Self {
            suite: suite.name().to_string(),
            rows: rows.len(),
            passed,
            failed: rows.len() - passed,
            max_rel_error: rows.iter().map(|r| r.rel_error).filter(|e| !e.is_nan()).fold(0.0, f64::max),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct FailureRow<'a> {
    suite: &'a str,
    test_id: &'a str,
    index: &'a str,
    rel_error: f64,
    tolerance: f64,
}

pub fn write_rows(path: &Path, rows: &[Row]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes summary.csv and failures.csv next to the per-suite reports.
pub fn write_summary(dir: &Path, results: &[(Suite, Vec<Row>)]) -> Result<Vec<SuiteSummary>, CliError> {
    let summaries: Vec<SuiteSummary> = results.iter().map(|(s, rows)| SuiteSummary::of(*s, rows)).collect();
    let mut w = csv::Writer::from_path(dir.join("summary.csv"))?;
    for s in &summaries {
        w.serialize(s)?;
    }
    w.flush()?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(dir.join("failures.csv"))?;
    w.write_record(["suite", "test_id", "index", "rel_error", "tolerance"])?;
    for (suite, rows) in results {
        for r in rows.iter().filter(|r| !r.pass) {
            w.serialize(FailureRow {
                suite: suite.name(),
                test_id: &r.test_id,
                index: &r.index,
                rel_error: r.rel_error,
                tolerance: r.tolerance,
            })?;
        }
    }
    w.flush()?;
    Ok(summaries)
}
