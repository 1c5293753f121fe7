//! Geodesic curvatures κ₁, κ₂ of base curves.
//!
//! Two independent routes: differentiating the sampled base curve
//! ([`frenet_curvatures`]) and evaluating the extremal formulas pointwise from
//! the covector along a normal geodesic ([`kappa_via_extremal`]).

use std::ops::Range;

use serde::Serialize;

use crate::criteria::cov_deriv_r_tensor;
use crate::error::{input, Result};
use crate::flows::{PhaseTrajectory, SampledCurve};
use crate::geometry::{base_frame, curvature_form, energy_unchecked, AnnihilatorCovector, Submersion};
use crate::Vector;

/// Below this κ₁ the normal e₂ is undefined and κ₂ is reported as 0.
pub const KAPPA_FLOOR: f64 = 1e-7;
pub const UNIT_SPEED_TOLERANCE: f64 = 1e-4;
pub const MIN_SAMPLES: usize = 8;
/// Relative energy drift beyond which a trajectory is not a geodesic.
pub const GEODESIC_DRIFT_TOLERANCE: f64 = 1e-6;

pub const DEFAULT_TOL_CONST: f64 = 1e-5;
pub const DEFAULT_TOL_VANISH: f64 = 1e-5;

/// Outcome of thresholding a curvature profile.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CurveVerdict {
    pub kappa1_constant: bool,
    pub kappa2_vanishing: bool,
    /// Mean κ₁ below the vanishing tolerance.
    pub geodesic: bool,
    pub kappa1_mean: f64,
    pub kappa1_rel_std: f64,
    pub kappa2_max: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureProfile {
    pub times: Vec<f64>,
    /// Base points, for output.
    pub points: Vec<Vector>,
    pub kappa1: Vec<f64>,
    pub kappa2: Vec<f64>,
    /// Verdict at the default tolerances.
    pub verdict: CurveVerdict,
}

impl CurvatureProfile {
    fn new(times: Vec<f64>, points: Vec<Vector>, kappa1: Vec<f64>, kappa2: Vec<f64>) -> Self {
        let mut p = Self {
            times,
            points,
            kappa1,
            kappa2,
            verdict: CurveVerdict {
                kappa1_constant: true,
                kappa2_vanishing: true,
                geodesic: true,
                kappa1_mean: 0.0,
                kappa1_rel_std: 0.0,
                kappa2_max: 0.0,
            },
        };
        p.verdict = classify_curve(&p, DEFAULT_TOL_CONST, DEFAULT_TOL_VANISH);
        p
    }
}

/// κ₁ is constant when std/mean < `tol_const`, or when its mean is below
/// `tol_vanish` (a geodesic, whose higher curvatures vanish by convention).
pub fn classify_curve(profile: &CurvatureProfile, tol_const: f64, tol_vanish: f64) -> CurveVerdict {
    let k1 = &profile.kappa1;
    let len = k1.len().max(1) as f64;
    let mean = k1.iter().sum::<f64>() / len;
    let var = k1.iter().map(|k| (k - mean).powi(2)).sum::<f64>() / len;
    let rel_std = if mean > 0.0 { var.sqrt() / mean } else { 0.0 };
    let kappa2_max = profile.kappa2.iter().cloned().fold(0.0, f64::max);
    let geodesic = mean < tol_vanish;
    CurveVerdict {
        kappa1_constant: geodesic || rel_std < tol_const,
        kappa2_vanishing: geodesic || kappa2_max < tol_vanish,
        geodesic,
        kappa1_mean: mean,
        kappa1_rel_std: rel_std,
        kappa2_max,
    }
}

const CENTRAL: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0];
const FORWARD_0: [f64; 5] = [-25.0, 48.0, -36.0, 16.0, -3.0];
const FORWARD_1: [f64; 5] = [-3.0, -10.0, 18.0, -6.0, 1.0];

/// Samples entering the derivative at index k.
fn stencil_nodes(k: usize, len: usize) -> Range<usize> {
    if k < 2 {
        0..5
    } else if k + 2 >= len {
        len - 5..len
    } else {
        k - 2..k + 3
    }
}

/// Fourth-order derivative of uniformly sampled data; one-sided stencils at
/// the two samples nearest each end. Needs at least five samples.
pub fn differentiate(samples: &[Vector], step: f64) -> Vec<Vector> {
    let len = samples.len();
    assert!(len >= 5, "differentiation needs five samples");
    let combine = |start: usize, w: &[f64; 5], sign: f64| {
        let mut acc = Vector::zeros(samples[0].len());
        for (o, c) in w.iter().enumerate() {
            if *c != 0.0 {
                acc += &samples[start + o] * *c;
            }
        }
        acc * (sign / (12.0 * step))
    };
    let mirrored = |w: &[f64; 5]| {
        let mut r = *w;
        r.reverse();
        r
    };
    (0..len)
        .map(|k| match k {
            0 => combine(0, &FORWARD_0, 1.0),
            1 => combine(0, &FORWARD_1, 1.0),
            _ if k == len - 1 => combine(len - 5, &mirrored(&FORWARD_0), -1.0),
            _ if k == len - 2 => combine(len - 5, &mirrored(&FORWARD_1), -1.0),
            _ => combine(k - 2, &CENTRAL, 1.0),
        })
        .collect()
}

fn scalar_derivative(values: &[f64], step: f64) -> Vec<f64> {
    let v: Vec<Vector> = values.iter().map(|x| Vector::from_element(1, *x)).collect();
    differentiate(&v, step).into_iter().map(|d| d[0]).collect()
}

fn uniform_step(times: &[f64]) -> Result<f64> {
    if times.len() < MIN_SAMPLES {
        return Err(input(format!("curvature needs at least {MIN_SAMPLES} samples, got {}", times.len())));
    }
    let step = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    if !(step > 0.0) {
        return Err(input("sample times must increase"));
    }
    Ok(step)
}

/// Removes the components along the given orthonormal vectors.
fn reject(v: &Vector, basis: &[&Vector]) -> Vector {
    let mut out = v.clone();
    for b in basis {
        out -= *b * b.dot(v);
    }
    out
}

/// Unit tangent e₁, principal normal e₂ and κ₁ along a sampled base curve.
/// e₂ is zero where κ₁ ≤ [`KAPPA_FLOOR`].
#[derive(Clone, Debug)]
pub struct FrenetFrame {
    pub e1: Vec<Vector>,
    pub e2: Vec<Vector>,
    pub kappa1: Vec<f64>,
}

pub fn frenet_frame(model: &dyn Submersion, eta: &SampledCurve) -> Result<FrenetFrame> {
    let base = model.base();
    let len = eta.len();
    let step = uniform_step(&eta.times)?;
    for (y, v) in eta.points.iter().zip(&eta.tangents) {
        let speed = base.norm(y, v);
        if (speed - 1.0).abs() > UNIT_SPEED_TOLERANCE {
            return Err(input(format!("curve is not unit speed (|η̇| = {speed})")));
        }
    }
    let accel = differentiate(&eta.tangents, step);
    let mut frame =
        FrenetFrame { e1: Vec::with_capacity(len), e2: Vec::with_capacity(len), kappa1: Vec::with_capacity(len) };
    for k in 0..len {
        let (y, v) = (&eta.points[k], &eta.tangents[k]);
        let speed = base.norm(y, v);
        let t = v / speed;
        let cov = base.tangent_projection(y, &(&accel[k] + base.christoffel(y, v, v)));
        // the part normal to e₁ is invariant under reparametrization
        let normal = reject(&cov, &[&t]);
        let k1 = normal.norm() / (speed * speed);
        frame.kappa1.push(k1);
        frame.e2.push(if k1 > KAPPA_FLOOR { normal.normalize() } else { Vector::zeros(v.len()) });
        frame.e1.push(t);
    }
    Ok(frame)
}

/// κ₁ and κ₂ by covariant differentiation of the sampled base curve.
pub fn frenet_curvatures(model: &dyn Submersion, eta: &SampledCurve) -> Result<CurvatureProfile> {
    let base = model.base();
    let len = eta.len();
    let step = uniform_step(&eta.times)?;
    let FrenetFrame { e1, e2, kappa1 } = frenet_frame(model, eta)?;
    let defined: Vec<bool> = kappa1.iter().map(|k| *k > KAPPA_FLOOR).collect();
    let de2 = differentiate(&e2, step);
    let kappa2 = (0..len)
        .map(|k| {
            if !stencil_nodes(k, len).all(|j| defined[j]) {
                return 0.0;
            }
            let (y, v) = (&eta.points[k], &eta.tangents[k]);
            let cov = base.tangent_projection(y, &(&de2[k] + base.christoffel(y, v, &e2[k])));
            reject(&cov, &[&e1[k], &e2[k]]).norm() / base.norm(y, v)
        })
        .collect();
    Ok(CurvatureProfile::new(eta.times.clone(), eta.points.clone(), kappa1, kappa2))
}

/// Pointwise data of the extremal formulas at one sample, in the orthonormal
/// frame dπ(X_i): unit velocity u, the covector b on 𝒱 rescaled to unit speed,
/// and w = λR(γ̇, ·) whose length is κ₁.
struct ExtremalPoint {
    u: Vector,
    b: AnnihilatorCovector,
    pairing: crate::Matrix,
    w: Vector,
}

fn extremal_point(model: &dyn Submersion, x: &Vector, lambda: &Vector, speed: f64) -> Result<ExtremalPoint> {
    let n = model.base_dim();
    let frame = model.frame(x);
    let u = Vector::from_fn(n, |i, _| lambda.dot(&frame.column(i)) / speed);
    let b = AnnihilatorCovector::vertical_part(model, x, lambda);
    let b = AnnihilatorCovector::new(b.coeffs / speed);
    let pairing = curvature_form(model, x)?.pair(&b);
    let w = pairing.tr_mul(&u);
    Ok(ExtremalPoint { u, b, pairing, w })
}

fn checked_speeds(model: &dyn Submersion, traj: &PhaseTrajectory) -> Result<Vec<f64>> {
    let energies: Vec<f64> = traj.states.iter().map(|s| energy_unchecked(model, &s.x, &s.lambda)).collect();
    let e0 = energies[0];
    let drift = energies.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max);
    if drift > GEODESIC_DRIFT_TOLERANCE * e0.max(f64::MIN_POSITIVE) {
        return Err(input(format!("trajectory is not a normal geodesic (energy drift {drift:e})")));
    }
    Ok(energies.iter().map(|e| (2.0 * e).sqrt()).collect())
}

fn base_curve(model: &dyn Submersion, traj: &PhaseTrajectory) -> Vec<Vector> {
    traj.states.iter().map(|s| model.project(&s.x)).collect()
}

/// κ₁ = |λ R(γ̇, ·)|_{g*} at every sample, λ rescaled to unit speed.
pub fn extremal_kappa1(model: &dyn Submersion, traj: &PhaseTrajectory) -> Result<Vec<f64>> {
    uniform_step(&traj.times)?;
    let speeds = checked_speeds(model, traj)?;
    traj.states
        .iter()
        .zip(&speeds)
        .map(|(s, sp)| {
            if *sp == 0.0 {
                return Ok(0.0);
            }
            Ok(extremal_point(model, &s.x, &s.lambda, *sp)?.w.norm())
        })
        .collect()
}

/// κ₁ and κ₂ from the extremal along a normal geodesic.
///
/// With u the unit velocity, P the pairing of λ with R and w = uP:
/// κ₁ = |w| and κ₂ = |λ(∇_γ̇ R)(γ̇, ·) + wP − (κ̇₁/κ₁) w + κ₁² u| / κ₁,
/// where κ̇₁ comes from differentiating the sampled κ₁.
pub fn kappa_via_extremal(model: &dyn Submersion, traj: &PhaseTrajectory) -> Result<CurvatureProfile> {
    let step = uniform_step(&traj.times)?;
    let speeds = checked_speeds(model, traj)?;
    let points = base_curve(model, traj);
    let len = traj.len();
    if speeds[0] == 0.0 {
        return Ok(CurvatureProfile::new(traj.times.clone(), points, vec![0.0; len], vec![0.0; len]));
    }
    let data = traj
        .states
        .iter()
        .zip(&speeds)
        .map(|(s, sp)| extremal_point(model, &s.x, &s.lambda, *sp))
        .collect::<Result<Vec<_>>>()?;
    let kappa1: Vec<f64> = data.iter().map(|d| d.w.norm()).collect();
    let dk1 = scalar_derivative(&kappa1, step);
    let mut kappa2 = Vec::with_capacity(len);
    for (k, d) in data.iter().enumerate() {
        if kappa1[k] <= KAPPA_FLOOR {
            kappa2.push(0.0);
            continue;
        }
        let x = &traj.states[k].x;
        let velocity = base_frame(model, x) * &d.u;
        let dr = cov_deriv_r_tensor(model, x, &velocity)?;
        let mut t1 = Vector::zeros(d.u.len());
        for (bk, dk) in d.b.coeffs.iter().zip(&dr) {
            t1 += dk.tr_mul(&d.u) * *bk;
        }
        let total = t1 + d.pairing.tr_mul(&d.w) - &d.w * (dk1[k] / kappa1[k]) + &d.u * kappa1[k].powi(2);
        kappa2.push(total.norm() / kappa1[k]);
    }
    Ok(CurvatureProfile::new(traj.times.clone(), points, kappa1, kappa2))
}
