use serde::{Deserialize, Serialize};

use crate::Vector;

/// Number of worst-case witnesses kept per report.
pub const MAX_WITNESSES: usize = 5;

/// One probe of a check: where it was evaluated and how badly it failed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub point: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alpha: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub v: Vec<f64>,
    pub residual: f64,
}

impl Witness {
    pub fn new(point: &Vector, alpha: &Vector, v: &Vector, residual: f64) -> Self {
        Self {
            point: point.iter().copied().collect(),
            alpha: alpha.iter().copied().collect(),
            v: v.iter().copied().collect(),
            residual,
        }
    }

    pub fn at_point(point: &Vector, residual: f64) -> Self {
        Self { point: point.iter().copied().collect(), alpha: Vec::new(), v: Vec::new(), residual }
    }
}

/// Pass/fail record of one check. `pass` holds exactly when
/// `max_residual < tolerance`; witnesses are sorted by residual, worst first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub witnesses: Vec<Witness>,
}

impl CheckReport {
    pub fn from_witnesses(
        name: impl Into<String>,
        tolerance: f64,
        witnesses: impl IntoIterator<Item = Witness>,
    ) -> Self {
        let mut all: Vec<Witness> = witnesses.into_iter().collect();
        let samples = all.len();
        // NaN residuals count as the worst possible outcome
        let key = |w: &Witness| if w.residual.is_nan() { f64::INFINITY } else { w.residual };
        all.sort_by(|a, b| key(b).total_cmp(&key(a)));
        let max_residual = all.first().map(key).unwrap_or(0.0);
        all.truncate(MAX_WITNESSES);
        Self { name: name.into(), pass: max_residual < tolerance, samples, max_residual, tolerance, witnesses: all }
    }

    /// Combines per-probe reports into one, keeping the worst witnesses overall.
    pub fn merge(name: impl Into<String>, tolerance: f64, parts: impl IntoIterator<Item = CheckReport>) -> Self {
        let mut samples = 0;
        let mut witnesses = Vec::new();
        for p in parts {
            samples += p.samples.max(1);
            witnesses.extend(p.witnesses);
        }
        let mut merged = Self::from_witnesses(name, tolerance, witnesses);
        merged.samples = samples;
        merged
    }
}

/// Deterministic ordering for aggregated reports: by name, then residual.
pub fn sort_reports(reports: &mut [CheckReport]) {
    reports.sort_by(|a, b| a.name.cmp(&b.name).then(a.max_residual.total_cmp(&b.max_residual)));
}
