//! CSV writers and the trace reader used by the plot command.

use std::io::{Read, Write};

use adanag_core::lyapunov::{Certificate, Status};
use adanag_core::solvers::Trace;

use crate::error::{BenchError, Result};

pub const TRACE_COLUMNS: [&str; 8] =
    ["k", "f", "f_minus_fstar", "grad_norm_sq", "step_size", "L_k", "V_k", "elapsed_s"];

/// Shortest representation that parses back to the same binary64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:e}")
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, fmt_f64)
}

/// One row per record. `potentials[i]` is V_{i−1}, so record k reports
/// `potentials[k + 1]`; missing entries leave V_k empty.
pub fn write_trace<W: Write>(w: W, trace: &Trace, f_star: Option<f64>, potentials: Option<&[f64]>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(TRACE_COLUMNS)?;
    for r in &trace.records {
        let v = potentials.and_then(|p| p.get(r.k + 1).copied());
        out.write_record([
            r.k.to_string(),
            fmt_f64(r.f),
            opt(f_star.map(|fs| r.f - fs)),
            fmt_f64(r.grad_norm_sq),
            fmt_f64(r.step),
            fmt_f64(r.curvature),
            opt(v),
            fmt_f64(r.elapsed_s),
        ])?;
    }
    out.flush().map_err(BenchError::io("trace csv"))?;
    Ok(())
}

/// The columns of a trace CSV needed for plotting.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceColumns {
    pub k: Vec<f64>,
    pub f_minus_fstar: Vec<f64>,
    pub elapsed_s: Vec<f64>,
}

pub fn read_trace<R: Read>(r: R) -> Result<TraceColumns> {
    let mut rd = csv::Reader::from_reader(r);
    let headers = rd.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| BenchError::Data(format!("trace csv lacks a {name} column")))
    };
    let (ik, ie, it) = (col("k")?, col("f_minus_fstar")?, col("elapsed_s")?);
    let mut out = TraceColumns { k: Vec::new(), f_minus_fstar: Vec::new(), elapsed_s: Vec::new() };
    for (row, rec) in rd.records().enumerate() {
        let rec = rec?;
        let num = |i: usize| -> Result<f64> {
            let s = rec.get(i).unwrap_or("");
            s.parse().map_err(|_| BenchError::Data(format!("row {}: {s:?} is not a number", row + 2)))
        };
        out.k.push(num(ik)?);
        out.f_minus_fstar.push(num(ie)?);
        out.elapsed_s.push(num(it)?);
    }
    Ok(out)
}

/// Progress of one trace at iteration k.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub solver: String,
    pub seed: u64,
    pub k: usize,
    pub f_minus_fstar: f64,
    /// min_{i≤k}‖∇f(x_i)‖².
    pub min_grad_norm_sq: f64,
    pub wall_s: f64,
    pub status: String,
}

/// Rows at k = 0, 1, 10, 100, … and at the last record.
pub fn summary_rows(trace: &Trace, solver: &str, seed: u64, f_star: f64, status: &str) -> Vec<SummaryRow> {
    let last = trace.last().k;
    let mut best = f64::INFINITY;
    let mut next = 0usize;
    let mut out = Vec::new();
    for r in &trace.records {
        best = best.min(r.grad_norm_sq);
        if r.k == next || r.k == last {
            out.push(SummaryRow {
                solver: solver.to_string(),
                seed,
                k: r.k,
                f_minus_fstar: r.f - f_star,
                min_grad_norm_sq: best,
                wall_s: r.elapsed_s,
                status: status.to_string(),
            });
        }
        if r.k == next {
            next = if next == 0 { 1 } else { next * 10 };
        }
    }
    out
}

pub fn write_summary<W: Write>(w: W, rows: &[SummaryRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["solver", "seed", "k", "f_minus_fstar", "min_grad_norm_sq", "wall_s", "status"])?;
    for r in rows {
        out.write_record([
            r.solver.clone(),
            r.seed.to_string(),
            r.k.to_string(),
            fmt_f64(r.f_minus_fstar),
            fmt_f64(r.min_grad_norm_sq),
            fmt_f64(r.wall_s),
            r.status.clone(),
        ])?;
    }
    out.flush().map_err(BenchError::io("summary csv"))?;
    Ok(())
}

/// Aggregate of one certificate kind over one trace.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateRow {
    pub solver: String,
    pub seed: u64,
    pub kind: &'static str,
    pub checked: usize,
    pub failed: usize,
    pub uncertifiable: usize,
    /// Largest lhs − rhs over the passing and failing checks.
    pub max_slack: f64,
    pub first_failure_k: Option<i64>,
}

pub fn certificate_rows(solver: &str, seed: u64, certs: &[Certificate]) -> Vec<CertificateRow> {
    let mut out: Vec<CertificateRow> = Vec::new();
    for c in certs {
        let kind = c.kind.as_str();
        let row = match out.iter_mut().position(|r| r.kind == kind) {
            Some(i) => &mut out[i],
            None => {
                out.push(CertificateRow {
                    solver: solver.to_string(),
                    seed,
                    kind,
                    checked: 0,
                    failed: 0,
                    uncertifiable: 0,
                    max_slack: f64::NEG_INFINITY,
                    first_failure_k: None,
                });
                out.last_mut().expect("just pushed")
            }
        };
        match c.status {
            Status::Uncertifiable => row.uncertifiable += 1,
            Status::Fail => {
                row.checked += 1;
                row.failed += 1;
                row.first_failure_k.get_or_insert(c.k);
            }
            Status::Pass => row.checked += 1,
        }
        if c.slack.is_finite() {
            row.max_slack = row.max_slack.max(c.slack);
        }
    }
    out
}

pub fn write_certificates<W: Write>(w: W, rows: &[CertificateRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "solver",
        "seed",
        "certificate",
        "checked",
        "failed",
        "uncertifiable",
        "max_slack",
        "first_failure_k",
    ])?;
    for r in rows {
        out.write_record([
            r.solver.clone(),
            r.seed.to_string(),
            r.kind.to_string(),
            r.checked.to_string(),
            r.failed.to_string(),
            r.uncertifiable.to_string(),
            fmt_f64(r.max_slack),
            r.first_failure_k.map_or_else(String::new, |k| k.to_string()),
        ])?;
    }
    out.flush().map_err(BenchError::io("certificate csv"))?;
    Ok(())
}
