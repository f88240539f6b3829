//! Trace and summary emission. Traces are CSV with a fixed column layout and
//! floats at 17 significant digits, so equal runs produce byte-identical
//! files and consumers can reconstruct every iterate exactly.

use std::io::Write;

use serde::Serialize;

use crate::analysis::{CoverageReport, FixClassification, RadiusEstimate};
use crate::engine::{Diagnostics, StepRecord, StopReason, Trajectory};
use crate::error::{Error, Result};
use crate::lift::LiftedSolution;
use crate::point::Point;
use crate::scenario::Algorithm;
use crate::spiral::SpiralClaimsReport;

/// One emitted row: the step index, the iterate, shadow, reflected shadow,
/// step norm, the chosen active pair, the two projection distances of the
/// step, and the shadow gap.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub n: usize,
    pub x: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub step_norm: f64,
    pub active_i: usize,
    pub active_j: usize,
    pub dist_a: f64,
    pub dist_b: f64,
    pub feasibility_gap: f64,
}

impl TraceRow {
    pub fn from_record(rec: &StepRecord) -> TraceRow {
        TraceRow {
            n: rec.n,
            x: rec.x.coords().to_vec(),
            a: rec.a.coords().to_vec(),
            b: rec.b.coords().to_vec(),
            step_norm: rec.step_norm,
            active_i: rec.pair.0,
            active_j: rec.pair.1,
            dist_a: rec.dist_a,
            dist_b: rec.dist_b,
            feasibility_gap: rec.feasibility_gap(),
        }
    }
}

/// 17 significant digits: enough to reproduce any f64 exactly.
fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn trace_header(dim: usize) -> String {
    let mut cols = vec!["n".to_string()];
    for prefix in ["x", "a", "b"] {
        for k in 0..dim {
            cols.push(format!("{prefix}{k}"));
        }
    }
    cols.extend(
        ["step_norm", "active_i", "active_j", "dist_a", "dist_b", "feasibility_gap"]
            .map(String::from),
    );
    cols.join(",")
}

pub fn write_trace<W: Write>(out: &mut W, trajectory: &Trajectory, dim: usize) -> Result<()> {
    let io = |e: std::io::Error| Error::Trace(e.to_string());
    writeln!(out, "{}", trace_header(dim)).map_err(io)?;
    for rec in &trajectory.records {
        let row = TraceRow::from_record(rec);
        let mut fields = Vec::with_capacity(3 * dim + 7);
        fields.push(row.n.to_string());
        for group in [&row.x, &row.a, &row.b] {
            fields.extend(group.iter().copied().map(fmt17));
        }
        fields.push(fmt17(row.step_norm));
        fields.push(row.active_i.to_string());
        fields.push(row.active_j.to_string());
        fields.push(fmt17(row.dist_a));
        fields.push(fmt17(row.dist_b));
        fields.push(fmt17(row.feasibility_gap));
        writeln!(out, "{}", fields.join(",")).map_err(io)?;
    }
    Ok(())
}

pub fn trace_to_string(trajectory: &Trajectory, dim: usize) -> String {
    let mut buf = Vec::new();
    write_trace(&mut buf, trajectory, dim).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("trace is ASCII")
}

/// Parse a trace document produced by [`write_trace`].
pub fn read_trace(text: &str) -> Result<Vec<TraceRow>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Trace("empty trace".into()))?;
    let cols: Vec<&str> = header.split(',').collect();
    let fixed = 7usize; // n + 6 trailing columns
    if cols.len() < fixed + 3 || !(cols.len() - fixed).is_multiple_of(3) {
        return Err(Error::Trace(format!("unrecognized header: {header}")));
    }
    let dim = (cols.len() - fixed) / 3;
    let parse_f = |s: &str, line: usize| -> Result<f64> {
        s.parse::<f64>()
            .map_err(|_| Error::Trace(format!("bad float '{s}' on line {line}")))
    };
    let parse_u = |s: &str, line: usize| -> Result<usize> {
        s.parse::<usize>()
            .map_err(|_| Error::Trace(format!("bad integer '{s}' on line {line}")))
    };
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols.len() {
            return Err(Error::Trace(format!(
                "line {} has {} fields, expected {}",
                k + 2,
                fields.len(),
                cols.len()
            )));
        }
        let lineno = k + 2;
        let grab = |offset: usize| -> Result<Vec<f64>> {
            fields[offset..offset + dim].iter().map(|s| parse_f(s, lineno)).collect()
        };
        rows.push(TraceRow {
            n: parse_u(fields[0], lineno)?,
            x: grab(1)?,
            a: grab(1 + dim)?,
            b: grab(1 + 2 * dim)?,
            step_norm: parse_f(fields[1 + 3 * dim], lineno)?,
            active_i: parse_u(fields[2 + 3 * dim], lineno)?,
            active_j: parse_u(fields[3 + 3 * dim], lineno)?,
            dist_a: parse_f(fields[4 + 3 * dim], lineno)?,
            dist_b: parse_f(fields[5 + 3 * dim], lineno)?,
            feasibility_gap: parse_f(fields[6 + 3 * dim], lineno)?,
        });
    }
    Ok(rows)
}

/// Outcome of one classification request.
#[derive(Clone, Debug, Serialize)]
pub struct ClassifySummary {
    pub at: Vec<f64>,
    pub classification: FixClassification,
}

/// Outcome of one radius request.
#[derive(Clone, Debug, Serialize)]
pub struct RadiusSummary {
    pub at: Vec<f64>,
    pub estimate: RadiusEstimate,
}

/// Digest of the spiral claims report.
#[derive(Clone, Debug, Serialize)]
pub struct ClaimsDigest {
    pub total: usize,
    pub failed: usize,
    pub all_passed: bool,
    pub failures: Vec<String>,
}

impl ClaimsDigest {
    pub fn from_report(report: &SpiralClaimsReport) -> ClaimsDigest {
        let failures: Vec<String> = report
            .failures()
            .iter()
            .map(|c| format!("{} at t = {}: {}", c.name, c.t, c.detail))
            .collect();
        ClaimsDigest {
            total: report.checks.len(),
            failed: failures.len(),
            all_passed: failures.is_empty(),
            failures,
        }
    }
}

/// The structured summary document accompanying a trace.
#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub scenario: String,
    pub algorithm: Algorithm,
    pub steps: usize,
    pub stop_reason: StopReason,
    pub final_point: Point,
    pub diagnostics: Diagnostics,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub classifications: Vec<ClassifySummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub radius_estimates: Vec<RadiusSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accumulation: Option<CoverageReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spiral_claims: Option<ClaimsDigest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lifted: Option<LiftedSolution>,
}

pub fn summary_to_json(summary: &RunSummary) -> String {
    serde_json::to_string_pretty(summary).expect("summary serializes")
}
