use std::fmt::Write as _;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generated::pipeline_spec;
use super::record::{IdentityRecord, LatticeMethod, Lhs};
use crate::error::{Error, Result};
use crate::lattice::{lattice_direct, lattice_mellin, lattice_mellin_dual};
use crate::quadrature::k_integral;
use crate::specfun::ellint_k;

/// Relative accuracy requested from the quadrature behind each left side.
pub const QUAD_TOL: f64 = 1e-12;
/// Ball radius for direct lattice summation.
pub const DIRECT_RADIUS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "SKIPPED")]
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub id: String,
    pub s: Option<f64>,
    pub status: Status,
    pub lhs_value: Option<f64>,
    pub rhs_value: Option<f64>,
    pub abs_err: Option<f64>,
    pub rel_err: Option<f64>,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub wall_time_ms: f64,
}

impl ReportRow {
    pub fn pass(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub records: usize,
    pub rows: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub rows: Vec<ReportRow>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report with timing fields zeroed, for reproducibility checks.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        r.timestamp = 0;
        r.rows.iter_mut().for_each(|row| row.wall_time_ms = 0.0);
        r
    }

    pub fn to_markdown(&self) -> String {
        let num = |x: Option<f64>, prec: bool| match x {
            Some(v) if prec => format!("{v:.15e}"),
            Some(v) => format!("{v:.2e}"),
            None => "-".into(),
        };
        let mut out = String::new();
        let _ = writeln!(out, "# Verification report: {}\n", self.suite);
        let s = &self.summary;
        let _ = writeln!(
            out,
            "{} records, {} rows: {} passed, {} failed, {} skipped.\n",
            s.records, s.rows, s.passed, s.failed, s.skipped
        );
        out.push_str("| id | s | status | lhs | rhs | rel err | tol | ms | note |\n");
        out.push_str("|---|---|---|---|---|---|---|---|---|\n");
        for r in &self.rows {
            let status = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIPPED",
            };
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} | {:.0e} | {:.1} | {} |",
                r.id,
                r.s.map_or("-".into(), |s| s.to_string()),
                status,
                num(r.lhs_value, true),
                num(r.rhs_value, true),
                num(r.rel_err.or(r.abs_err), false),
                r.tolerance,
                r.wall_time_ms,
                r.reason.as_deref().unwrap_or("").replace('|', "\\|"),
            );
        }
        out
    }
}

/// Numeric value of a left side at `s`.
pub fn evaluate_lhs(lhs: &Lhs, s: Option<f64>) -> Result<f64> {
    let scaled = |v: f64, scale: Option<&super::ClosedFormExpr>| -> Result<f64> { Ok(v * scale.map_or(Ok(1.0), |e| e.eval(s))?) };
    match lhs {
        Lhs::KIntegral { .. } => {
            let (spec, scale) = lhs.k_spec(s)?.unwrap();
            scaled(k_integral(&spec, QUAD_TOL)?.value, scale)
        }
        Lhs::Lattice { method, scale, .. } => {
            let spec = lhs.lattice_spec(s)?.unwrap();
            let v = match method {
                LatticeMethod::Mellin => lattice_mellin(&spec, QUAD_TOL)?,
                LatticeMethod::Dual => lattice_mellin_dual(&spec, QUAD_TOL)?,
                LatticeMethod::Direct => lattice_direct(&spec, DIRECT_RADIUS)?.0,
            };
            scaled(v, scale.as_ref())
        }
        Lhs::CompleteK { k } => ellint_k(k.eval(s)?),
        Lhs::Generated(p) => Ok(k_integral(&pipeline_spec(*p, s)?, QUAD_TOL)?.value),
        Lhs::Combination { terms } => {
            let mut acc = 0.0;
            for t in terms {
                acc += t.coef.eval(s)? * evaluate_lhs(&t.lhs, s)?;
            }
            Ok(acc)
        }
    }
}

/// Verifies one record at one `s`; errors on either side become a FAIL row.
pub fn verify_identity(record: &IdentityRecord, s: Option<f64>, tol: f64) -> ReportRow {
    let start = Instant::now();
    let lhs = evaluate_lhs(&record.lhs, s);
    let rhs = record.rhs.eval(s);
    let mut row = ReportRow {
        id: record.id.clone(),
        s,
        status: Status::Fail,
        lhs_value: lhs.as_ref().ok().copied(),
        rhs_value: rhs.as_ref().ok().copied(),
        abs_err: None,
        rel_err: None,
        tolerance: tol,
        reason: None,
        wall_time_ms: 0.0,
    };
    match (lhs, rhs) {
        (Ok(l), Ok(r)) => {
            let abs = (l - r).abs();
            row.abs_err = Some(abs);
            let ok = if r != 0.0 {
                let rel = abs / r.abs();
                row.rel_err = Some(rel);
                rel <= tol
            } else {
                abs <= tol
            };
            if ok {
                row.status = Status::Pass;
            } else {
                row.reason = Some("outside tolerance".into());
            }
        }
        (Err(e), _) => row.reason = Some(format!("lhs: {e}")),
        (_, Err(e)) => row.reason = Some(format!("rhs: {e}")),
    }
    row.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    row
}

fn skipped_row(record: &IdentityRecord, s: f64, reason: &str) -> ReportRow {
    ReportRow {
        id: record.id.clone(),
        s: Some(s),
        status: Status::Skipped,
        lhs_value: None,
        rhs_value: None,
        abs_err: None,
        rel_err: None,
        tolerance: record.tolerance_class.tolerance(),
        reason: Some(reason.to_string()),
        wall_time_ms: 0.0,
    }
}

/// Verifies every record selected by `filter` (see
/// [`IdentityRecord::matches`]) on its `s` grid. Rows come out in registry
/// order whatever the execution order; `parallelism` caps the worker
/// threads (`None`: rayon's default).
pub fn run_suite(records: &[IdentityRecord], filter: &str, parallelism: Option<usize>) -> Result<VerificationReport> {
    let selected: Vec<&IdentityRecord> = records.iter().filter(|r| r.matches(filter)).collect();
    let jobs: Vec<(&IdentityRecord, Option<f64>)> = selected.iter().flat_map(|r| r.grid().into_iter().map(move |s| (*r, s))).collect();
    let work = || -> Vec<ReportRow> { jobs.par_iter().map(|(r, s)| verify_identity(r, *s, r.tolerance_class.tolerance())).collect() };
    let computed = match parallelism {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    };
    let mut computed = computed.into_iter();
    let mut rows = Vec::new();
    for r in &selected {
        for _ in r.grid() {
            rows.push(computed.next().unwrap());
        }
        rows.extend(r.skipped.iter().map(|k| skipped_row(r, k.s, &k.reason)));
    }
    let count = |st: Status| rows.iter().filter(|r| r.status == st).count();
    let summary = Summary {
        records: selected.len(),
        rows: rows.len(),
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        skipped: count(Status::Skipped),
    };
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let suite = if filter.trim().is_empty() { "all".to_string() } else { filter.trim().to_string() };
    Ok(VerificationReport { suite, timestamp, rows, summary })
}
