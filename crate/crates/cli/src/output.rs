//! CSV and JSON writers.
//!
//! Floats are written with 17 significant digits so that values round-trip
//! exactly.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use subriem::flows::PhaseTrajectory;
use subriem::frenet::{CurvatureProfile, CurveVerdict};
use subriem::report::CheckReport;

use crate::CliError;

pub fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn push_row(out: &mut String, values: impl IntoIterator<Item = f64>) {
    let row: Vec<String> = values.into_iter().map(float).collect();
    out.push_str(&row.join(","));
    out.push('\n');
}

/// `t,x1..xm,lambda1..lambdam`.
pub fn trajectory_csv(traj: &PhaseTrajectory) -> String {
    let c = traj.states.first().map_or(0, |s| s.x.len());
    let mut out = String::from("t");
    for i in 1..=c {
        let _ = write!(out, ",x{i}");
    }
    for i in 1..=c {
        let _ = write!(out, ",lambda{i}");
    }
    out.push('\n');
    for (t, s) in traj.times.iter().zip(&traj.states) {
        push_row(&mut out, std::iter::once(*t).chain(s.x.iter().copied()).chain(s.lambda.iter().copied()));
    }
    out
}

/// `t,y1..yn,kappa1,kappa2`.
pub fn curvature_csv(profile: &CurvatureProfile) -> String {
    let d = profile.points.first().map_or(0, |p| p.len());
    let mut out = String::from("t");
    for i in 1..=d {
        let _ = write!(out, ",y{i}");
    }
    out.push_str(",kappa1,kappa2\n");
    for k in 0..profile.times.len() {
        let row = std::iter::once(profile.times[k])
            .chain(profile.points[k].iter().copied())
            .chain([profile.kappa1[k], profile.kappa2[k]]);
        push_row(&mut out, row);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CurveSummary {
    pub index: usize,
    pub x0: Vec<f64>,
    pub lambda0: Vec<f64>,
    pub unit_normalized: bool,
    pub trajectory_csv: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curvature_csv: Option<String>,
    /// Absent for stationary curves.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<CurveVerdict>,
    pub tol_const: f64,
    pub tol_vanish: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub route_agreement: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Tolerances {
    pub algebraic: f64,
    pub numeric: f64,
}

/// Wall-clock data: the only non-deterministic part of a report.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Timing {
    pub unix_time: f64,
    pub elapsed_seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub experiment: String,
    pub model: String,
    pub seed: u64,
    #[serde(rename = "T")]
    pub t_end: f64,
    pub h: f64,
    pub tolerances: Tolerances,
    pub pass: bool,
    pub checks: Vec<CheckReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
    pub curves: Vec<CurveSummary>,
    pub timing: Timing,
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

pub fn report_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}
