//! Experiment configuration files.
//!
//! A config is a TOML document whose top-level tables are experiments, run in
//! file order. See the README for the full key list.

use std::collections::BTreeSet;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;
use subriem::geometry::{initial_covector, AnnihilatorCovector, PhaseState, Submersion};
use subriem::models::{self, StructureConstants};
use subriem::{sampling, Vector};

use crate::checks::Check;
use crate::CliError;

/// One experiment section as written in the file.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: String,
    /// `[k, i, j, value]` rows, 1-based indices, for `model = "step2-carnot"`.
    #[serde(default)]
    pub structure_constants: Option<Vec<[f64; 4]>>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(rename = "T")]
    pub t_end: f64,
    pub h: f64,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub checks: Vec<String>,
    #[serde(default)]
    pub ics: Vec<InitialCondition>,
    #[serde(default)]
    pub random_ics: usize,
    #[serde(default)]
    pub random_probes: Option<usize>,
    #[serde(default)]
    pub tol_algebraic: Option<f64>,
    #[serde(default)]
    pub tol_numeric: Option<f64>,
    #[serde(default)]
    pub output_dir: Option<String>,
}

/// Either a phase-space point (x₀, λ₀) or (x₀, α, v) with v tangent to N at π(x₀).
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged, deny_unknown_fields)]
pub enum InitialCondition {
    Phase { x: Vec<f64>, lambda: Vec<f64> },
    Probe { x: Vec<f64>, alpha: Vec<f64>, v: Vec<f64> },
}

pub const DEFAULT_SEED: u64 = 0x5EED;
pub const DEFAULT_PROBES: usize = 50;

/// A validated experiment ready to run.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub name: String,
    pub model_name: String,
    pub model: Arc<dyn Submersion>,
    pub t_end: f64,
    pub h: f64,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub ics: Vec<PhaseState>,
    /// Generated from the effective seed when the experiment runs.
    pub random_ics: usize,
    pub probes: usize,
    pub tol_algebraic: Option<f64>,
    pub tol_numeric: Option<f64>,
    pub output_dir: Option<String>,
}

fn config_error(section: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("[{section}] {msg}"))
}

pub fn parse_str(text: &str) -> Result<Vec<(String, ExperimentConfig)>, CliError> {
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| CliError::Input(e.to_string()))?;
    if table.is_empty() {
        return Err(CliError::Input("config contains no experiment sections".into()));
    }
    table
        .into_iter()
        .map(|(name, value)| {
            if !value.is_table() {
                return Err(config_error(&name, "top-level keys must be experiment sections"));
            }
            let cfg: ExperimentConfig = value.try_into().map_err(|e| config_error(&name, e))?;
            Ok((name, cfg))
        })
        .collect()
}

pub fn load(path: &Path) -> Result<Vec<Experiment>, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_str(&text)?.into_iter().map(|(n, c)| c.validate(&n)).collect()
}

fn build_model(section: &str, cfg: &ExperimentConfig) -> Result<Arc<dyn Submersion>, CliError> {
    if cfg.model != "step2-carnot" {
        if cfg.structure_constants.is_some() {
            return Err(config_error(section, "structure_constants require model = \"step2-carnot\""));
        }
        return models::by_name(&cfg.model).map_err(|e| config_error(section, e));
    }
    let (Some(n), Some(m), Some(rows)) = (cfg.n, cfg.m, cfg.structure_constants.as_ref()) else {
        return Err(config_error(section, "step2-carnot needs n, m and structure_constants"));
    };
    if !(m > n && n >= 2) {
        return Err(config_error(section, format!("need m > n ≥ 2, got n = {n}, m = {m}")));
    }
    let mut entries = Vec::with_capacity(rows.len());
    for row in rows {
        let idx: Vec<usize> = row[..3]
            .iter()
            .map(|v| if *v >= 1.0 && v.fract() == 0.0 { Ok(*v as usize - 1) } else { Err(()) })
            .collect::<Result<_, _>>()
            .map_err(|_| {
                config_error(section, format!("structure constant indices must be positive integers: {row:?}"))
            })?;
        entries.push((idx[0], idx[1], idx[2], row[3]));
    }
    let constants = StructureConstants::from_entries(n, m - n, &entries).map_err(|e| config_error(section, e))?;
    Ok(Arc::new(models::step2_carnot(constants).map_err(|e| config_error(section, e))?))
}

fn vector(section: &str, what: &str, xs: &[f64]) -> Result<Vector, CliError> {
    if xs.iter().any(|v| !v.is_finite()) {
        return Err(config_error(section, format!("{what} has non-finite entries")));
    }
    Ok(Vector::from_column_slice(xs))
}

fn initial_state(section: &str, model: &dyn Submersion, ic: &InitialCondition) -> Result<PhaseState, CliError> {
    let err = |e: subriem::Error| config_error(section, e);
    match ic {
        InitialCondition::Phase { x, lambda } => {
            let st = PhaseState::new(vector(section, "x", x)?, vector(section, "lambda", lambda)?);
            st.validate(model).map_err(err)?;
            Ok(st)
        }
        InitialCondition::Probe { x, alpha, v } => {
            let x = vector(section, "x", x)?;
            model.check_point(&x).map_err(err)?;
            let alpha = AnnihilatorCovector::new(vector(section, "alpha", alpha)?);
            let rank = model.dim() - model.base_dim();
            if alpha.coeffs.len() != rank {
                return Err(config_error(section, format!("alpha needs {rank} entries")));
            }
            let v = vector(section, "v", v)?;
            if v.len() != model.base().chart_dim() {
                return Err(config_error(section, format!("v needs {} entries", model.base().chart_dim())));
            }
            let lambda = initial_covector(model, &x, &alpha, &v).map_err(err)?;
            Ok(PhaseState::new(x, lambda))
        }
    }
}

/// Random initial conditions: λ₀ built from a fixed-seed probe (x, α, v).
pub fn random_states(model: &dyn Submersion, count: usize, seed: u64) -> Vec<PhaseState> {
    sampling::probes(model, count, seed ^ 0x1C5)
        .into_iter()
        .map(|p| {
            let lambda = initial_covector(model, &p.x, &p.alpha, &p.v).expect("sampled frames are non-degenerate");
            PhaseState::new(p.x, lambda)
        })
        .collect()
}

impl ExperimentConfig {
    pub fn validate(&self, section: &str) -> Result<Experiment, CliError> {
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(config_error(section, format!("T must be positive, got {}", self.t_end)));
        }
        if !(self.h > 0.0 && self.h < self.t_end) {
            return Err(config_error(section, format!("h must satisfy 0 < h < T, got {}", self.h)));
        }
        for (what, tol) in [("tol_algebraic", self.tol_algebraic), ("tol_numeric", self.tol_numeric)] {
            if let Some(t) = tol {
                if !(t > 0.0 && t.is_finite()) {
                    return Err(config_error(section, format!("{what} must be positive")));
                }
            }
        }
        let model = build_model(section, self)?;
        let mut seen = BTreeSet::new();
        let mut checks = Vec::new();
        for name in &self.checks {
            let c = Check::from_name(name).ok_or_else(|| config_error(section, format!("unknown check '{name}'")))?;
            if seen.insert(c) {
                checks.push(c);
            }
        }
        let ics =
            self.ics.iter().map(|ic| initial_state(section, model.as_ref(), ic)).collect::<Result<Vec<_>, _>>()?;
        Ok(Experiment {
            name: section.to_string(),
            model_name: self.model.clone(),
            model,
            t_end: self.t_end,
            h: self.h,
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            checks,
            ics,
            random_ics: self.random_ics,
            probes: self.random_probes.unwrap_or(DEFAULT_PROBES),
            tol_algebraic: self.tol_algebraic,
            tol_numeric: self.tol_numeric,
            output_dir: self.output_dir.clone(),
        })
    }
}
