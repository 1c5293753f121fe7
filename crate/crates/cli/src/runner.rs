//! Runs experiments: integrates the requested initial conditions, evaluates
//! checks and writes the outputs of each experiment to its own directory.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use subriem::criteria::{sweep, DEFAULT_TOL_ALGEBRAIC, DEFAULT_TOL_NUMERIC};
use subriem::extension::{
    check_nondegenerate, check_normalization_identity, check_step2_decomposition, compare_projections, ExtendedCometric,
};
use subriem::flows::{integrate_normal_geodesic, project_trajectory};
use subriem::frenet::{classify_curve, extremal_kappa1, frenet_curvatures, CurvatureProfile, MIN_SAMPLES};
use subriem::geometry::{model_invariants, PhaseState};
use subriem::models;
use subriem::report::{sort_reports, CheckReport, Witness};
use subriem::{sampling, Error, Vector};

use crate::checks::Check;
use crate::config::{random_states, Experiment, DEFAULT_PROBES, DEFAULT_SEED};
use crate::output::{self, CurveSummary, Report, Timing, Tolerances};
use crate::CliError;

/// Environment variable overriding the output directory of configs.
pub const OUT_ENV: &str = "SUBRIEM_OUT";
pub const DEFAULT_OUT: &str = "subriem-out";

/// Random initial conditions used for curve checks when none are configured.
pub const DEFAULT_CURVE_ICS: usize = 10;
/// Initial conditions fed to the projection comparison.
pub const COMPARE_ICS: usize = 5;

pub const VERIFY_T: f64 = 5.0;
pub const VERIFY_H: f64 = 1e-3;

/// Overrides from the command line.
#[derive(Clone, Debug, Default)]
pub struct Settings {
    pub tol_algebraic: Option<f64>,
    pub tol_numeric: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    /// Value of [`OUT_ENV`], read by the binary.
    pub env_out: Option<PathBuf>,
}

pub struct Outcome {
    pub report: Report,
    pub dir: PathBuf,
}

impl Outcome {
    pub fn pass(&self) -> bool {
        self.report.pass
    }
}

struct Curve {
    state: PhaseState,
    profile: Option<CurvatureProfile>,
    agreement: Option<f64>,
}

fn check_error(check: Check, tol: f64, x: Option<&Vector>) -> CheckReport {
    let point = x.cloned().unwrap_or_else(|| Vector::zeros(0));
    let mut rep = CheckReport::from_witnesses(check.name(), tol, [Witness::at_point(&point, f64::INFINITY)]);
    rep.samples = 0;
    rep
}

fn with_tolerance(mut rep: CheckReport, tol: f64) -> CheckReport {
    rep.tolerance = tol;
    rep.pass = rep.max_residual < tol;
    rep
}

fn integrate_curves(
    exp: &Experiment,
    states: &[PhaseState],
    dir: &Path,
    route: bool,
    tol_vanish: f64,
) -> Result<(Vec<Curve>, Vec<CurveSummary>), CliError> {
    let model = exp.model.as_ref();
    let mut curves = Vec::with_capacity(states.len());
    let mut summaries = Vec::with_capacity(states.len());
    for (i, st) in states.iter().enumerate() {
        let traj = integrate_normal_geodesic(model, st, exp.t_end, exp.h)?;
        let traj_name = format!("ic{i:03}_trajectory.csv");
        output::write_file(&dir.join(&traj_name), &output::trajectory_csv(&traj))?;
        let normalized = traj.states[0].unit_normalized;
        let (mut profile, mut agreement, mut curv_name) = (None, None, None);
        if normalized {
            if traj.len() < MIN_SAMPLES {
                return Err(CliError::Input(format!(
                    "[{}] T/h gives {} samples; curvature needs {MIN_SAMPLES}",
                    exp.name,
                    traj.len()
                )));
            }
            let p = frenet_curvatures(model, &project_trajectory(model, &traj)?)?;
            let name = format!("ic{i:03}_curvature.csv");
            output::write_file(&dir.join(&name), &output::curvature_csv(&p))?;
            if route {
                let k1 = extremal_kappa1(model, &traj)?;
                agreement = Some(p.kappa1.iter().zip(&k1).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
            }
            curv_name = Some(name);
            profile = Some(p);
        }
        summaries.push(CurveSummary {
            index: i,
            x0: traj.states[0].x.iter().copied().collect(),
            lambda0: traj.states[0].lambda.iter().copied().collect(),
            unit_normalized: normalized,
            trajectory_csv: traj_name,
            curvature_csv: curv_name,
            verdict: profile.as_ref().map(|p| classify_curve(p, tol_vanish, tol_vanish)),
            tol_const: tol_vanish,
            tol_vanish,
            route_agreement: agreement,
        });
        curves.push(Curve { state: traj.states[0].clone(), profile, agreement });
    }
    Ok((curves, summaries))
}

fn curve_report(check: Check, tol: f64, curves: &[Curve]) -> CheckReport {
    let ws = curves.iter().map(|c| {
        let residual = match (check, &c.profile) {
            (_, None) => 0.0,
            (Check::Kappa1Constant, Some(p)) => {
                let v = classify_curve(p, tol, tol);
                if v.geodesic {
                    0.0
                } else {
                    v.kappa1_rel_std
                }
            }
            (Check::Kappa2Vanishing, Some(p)) => {
                let v = classify_curve(p, tol, tol);
                if v.geodesic {
                    0.0
                } else {
                    v.kappa2_max
                }
            }
            _ => c.agreement.unwrap_or(0.0),
        };
        Witness::new(&c.state.x, &Vector::zeros(0), &c.state.lambda, residual)
    });
    CheckReport::from_witnesses(check.name(), tol, ws)
}

fn run_check(
    exp: &Experiment,
    check: Check,
    tol: f64,
    seed: u64,
    probes: &[sampling::Probe],
    curves: &[Curve],
) -> subriem::Result<CheckReport> {
    let model = exp.model.as_ref();
    let metric = ExtendedCometric::default();
    let points: Vec<Vector> = probes.iter().map(|p| p.x.clone()).collect();
    match check {
        Check::ModelInvariants => Ok(with_tolerance(model_invariants(model, &points), tol)),
        Check::Theorem1 => sweep::theorem1(model, probes, exp.t_end, exp.h, tol),
        Check::Theorem2Parallel => sweep::theorem2_parallel(model, probes, exp.t_end, exp.h, tol),
        Check::J2 => sweep::j2(model, probes, tol),
        Check::RvRwOrthogonality => sweep::rvrw(model, probes, seed, tol),
        Check::DotKappa => sweep::dot_kappa(model, probes, tol),
        Check::CovDerivR => sweep::cov_deriv_r(model, probes, tol),
        Check::HType => sweep::htype(model, &metric, probes, tol),
        Check::LocalConditionD => sweep::local_condition_d(model, probes, tol),
        Check::Nondegenerate => Ok(with_tolerance(check_nondegenerate(model, &metric, &points)?, tol)),
        Check::Step2Decomposition => Ok(with_tolerance(check_step2_decomposition(model, &points)?, tol)),
        Check::NormalizationIdentity => {
            let ws = probes
                .iter()
                .map(|p| {
                    let r = check_normalization_identity(model, &p.x, &p.alpha)?;
                    Ok(Witness::new(&p.x, &p.alpha.coeffs, &Vector::zeros(0), r))
                })
                .collect::<subriem::Result<Vec<_>>>()?;
            Ok(CheckReport::from_witnesses(check.name(), tol, ws))
        }
        Check::CompareProjections => {
            let ws = curves
                .iter()
                .take(COMPARE_ICS)
                .map(|c| {
                    let d = compare_projections(model, &metric, &c.state, exp.t_end, exp.h)?;
                    Ok(Witness::new(&c.state.x, &Vector::zeros(0), &c.state.lambda, d))
                })
                .collect::<subriem::Result<Vec<_>>>()?;
            Ok(CheckReport::from_witnesses(check.name(), tol, ws))
        }
        Check::Kappa1Constant | Check::Kappa2Vanishing | Check::RouteAgreement => Ok(curve_report(check, tol, curves)),
        Check::BaseR2 => sweep::base_r2(model, probes, seed, tol),
    }
}

fn needs_curves(checks: &[Check]) -> bool {
    checks.iter().any(|c| {
        matches!(c, Check::Kappa1Constant | Check::Kappa2Vanishing | Check::RouteAgreement | Check::CompareProjections)
    })
}

/// Output directory of an experiment: the `--out` flag, then the environment,
/// then the config file, then the default; each experiment writes to its own
/// subdirectory.
pub fn output_root(settings: &Settings, exp: &Experiment) -> PathBuf {
    settings
        .out
        .clone()
        .or_else(|| settings.env_out.clone())
        .or_else(|| exp.output_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

pub fn run_experiment(exp: &Experiment, settings: &Settings) -> Result<Outcome, CliError> {
    let started = Instant::now();
    let unix_time = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64());
    let tol_a = settings.tol_algebraic.or(exp.tol_algebraic).unwrap_or(DEFAULT_TOL_ALGEBRAIC);
    let tol_n = settings.tol_numeric.or(exp.tol_numeric).unwrap_or(DEFAULT_TOL_NUMERIC);
    let seed = settings.seed.unwrap_or(exp.seed);
    let model = exp.model.as_ref();
    let dir = output_root(settings, exp).join(&exp.name);
    std::fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;

    let mut states = exp.ics.clone();
    let mut random = exp.random_ics;
    if states.is_empty() && random == 0 && needs_curves(&exp.checks) {
        random = DEFAULT_CURVE_ICS;
    }
    states.extend(random_states(model, random, seed));
    let route = exp.checks.contains(&Check::RouteAgreement);
    let (curves, summaries) = integrate_curves(exp, &states, &dir, route, tol_n)?;

    let probes = sampling::probes(model, exp.probes, seed);
    let mut reports = Vec::with_capacity(exp.checks.len());
    let mut errors = Vec::new();
    for &check in &exp.checks {
        let tol = check.tolerance(tol_a, tol_n);
        match run_check(exp, check, tol, seed, &probes, &curves) {
            Ok(rep) => reports.push(rep),
            Err(Error::Divergence { last_good_time }) => return Err(CliError::Divergence(last_good_time)),
            Err(e) => {
                errors.push(format!("{check}: {e}"));
                reports.push(check_error(check, tol, probes.first().map(|p| &p.x)));
            }
        }
    }
    sort_reports(&mut reports);
    let pass = reports.iter().all(|r| r.pass);
    let report = Report {
        experiment: exp.name.clone(),
        model: exp.model_name.clone(),
        seed,
        t_end: exp.t_end,
        h: exp.h,
        tolerances: Tolerances { algebraic: tol_a, numeric: tol_n },
        pass,
        checks: reports,
        errors,
        curves: summaries,
        timing: Timing { unix_time, elapsed_seconds: started.elapsed().as_secs_f64() },
    };
    output::write_file(&dir.join("report.json"), &output::report_json(&report))?;
    Ok(Outcome { report, dir })
}

/// The experiment run by `verify <model>`: every check with default settings.
pub fn verify_experiment(model_name: &str) -> Result<Experiment, CliError> {
    let model = models::by_name(model_name)?;
    Ok(Experiment {
        name: format!("verify-{model_name}"),
        model_name: model_name.to_string(),
        model,
        t_end: VERIFY_T,
        h: VERIFY_H,
        seed: DEFAULT_SEED,
        checks: Check::ALL.to_vec(),
        ics: Vec::new(),
        random_ics: DEFAULT_CURVE_ICS,
        probes: DEFAULT_PROBES,
        tol_algebraic: None,
        tol_numeric: None,
        output_dir: None,
    })
}

pub fn print_summary(out: &mut impl Write, outcome: &Outcome) -> std::io::Result<()> {
    let r = &outcome.report;
    writeln!(out, "{} ({}, seed {})", r.experiment, r.model, r.seed)?;
    for c in &r.checks {
        writeln!(
            out,
            "  {:<24} {}  max residual {:>12.4e}  tolerance {:>10.1e}  samples {}",
            c.name,
            if c.pass { "PASS" } else { "FAIL" },
            c.max_residual,
            c.tolerance,
            c.samples
        )?;
    }
    for e in &r.errors {
        writeln!(out, "  error: {e}")?;
    }
    writeln!(out, "  report: {}", outcome.dir.join("report.json").display())
}
