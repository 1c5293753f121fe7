//! Fixed-step RK4 flows: normal geodesics, horizontal lifts, base geodesics,
//! parallel transport on N, ▼-transport of annihilators and geodesics of the
//! extended metric.
//!
//! Flows that follow a sampled curve evaluate it between grid nodes with
//! cubic Hermite interpolation built from the stored points and tangents.

use crate::error::{geometry, input, Error, Result};
use crate::extension::ExtendedCometric;
use crate::geometry::{
    bracket, check_finite_len, coframe, energy_unchecked, frame_jacobians, lift_base_vector, AnnihilatorCovector,
    PhaseState, Submersion,
};
use crate::{Matrix, Vector};

/// States whose norm exceeds this are treated as a blow-up.
pub const DIVERGENCE_BOUND: f64 = 1e12;

/// Tolerance on π(x₀) = η(0) for horizontal lifts.
pub const LIFT_BASEPOINT_TOLERANCE: f64 = 1e-8;

/// Largest vertical component accepted on a curve declared horizontal.
pub const HORIZONTALITY_TOLERANCE: f64 = 1e-6;

/// Horizontal pairings below this (relative to |λ|) are treated as zero.
pub const ANNIHILATOR_PAIRING_TOLERANCE: f64 = 1e-12;

/// A time-sampled solution of Hamilton's equations on T*M.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<PhaseState>,
    pub step: f64,
}

impl PhaseTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> &PhaseState {
        self.states.last().expect("trajectories hold at least one sample")
    }
}

/// A curve sampled on a uniform grid together with its velocity.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledCurve {
    pub times: Vec<f64>,
    pub points: Vec<Vector>,
    pub tangents: Vec<Vector>,
    pub step: f64,
}

impl SampledCurve {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Cubic Hermite position and velocity at fraction `s` of interval `k`.
    pub fn hermite(&self, k: usize, s: f64) -> (Vector, Vector) {
        let h = self.times[k + 1] - self.times[k];
        let (p0, p1) = (&self.points[k], &self.points[k + 1]);
        let (m0, m1) = (&self.tangents[k] * h, &self.tangents[k + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let pos = p0 * (2.0 * s3 - 3.0 * s2 + 1.0)
            + &m0 * (s3 - 2.0 * s2 + s)
            + p1 * (-2.0 * s3 + 3.0 * s2)
            + &m1 * (s3 - s2);
        let vel = (p0 * (6.0 * s2 - 6.0 * s)
            + &m0 * (3.0 * s2 - 4.0 * s + 1.0)
            + p1 * (-6.0 * s2 + 6.0 * s)
            + &m1 * (3.0 * s2 - 2.0 * s))
            / h;
        (pos, vel)
    }

    /// Builds a curve from positions alone, estimating velocities with
    /// fourth-order differences.
    pub fn from_points(times: Vec<f64>, points: Vec<Vector>) -> Result<Self> {
        if points.len() != times.len() || points.len() < 5 {
            return Err(input("at least five samples with matching times are required"));
        }
        let step = times[1] - times[0];
        let tangents = crate::frenet::differentiate(&points, step);
        Ok(Self { times, points, tangents, step })
    }
}

fn grid(t_end: f64, h: f64) -> Result<(usize, f64)> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(input(format!("step size must be positive, got {h}")));
    }
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(input(format!("duration must be non-negative, got {t_end}")));
    }
    if t_end == 0.0 {
        return Ok((0, h));
    }
    let steps = (t_end / h).round().max(1.0) as usize;
    Ok((steps, t_end / steps as f64))
}

fn check_bounded(y: &Vector, t_prev: f64) -> Result<()> {
    if y.iter().any(|c| !c.is_finite()) || y.norm() > DIVERGENCE_BOUND {
        return Err(Error::Divergence { last_good_time: t_prev });
    }
    Ok(())
}

fn rk4_step<F>(f: &mut F, t: f64, y: &Vector, h: f64) -> Result<Vector>
where
    F: FnMut(f64, &Vector) -> Result<Vector>,
{
    let k1 = f(t, y)?;
    let k2 = f(t + 0.5 * h, &(y + &k1 * (0.5 * h)))?;
    let k3 = f(t + 0.5 * h, &(y + &k2 * (0.5 * h)))?;
    let k4 = f(t + h, &(y + &k3 * h))?;
    Ok(y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0))
}

/// Classical RK4 on a uniform grid over [0, t_end].
pub fn rk4<F>(mut f: F, y0: Vector, t_end: f64, h: f64) -> Result<(Vec<f64>, Vec<Vector>, f64)>
where
    F: FnMut(f64, &Vector) -> Result<Vector>,
{
    let (steps, dt) = grid(t_end, h)?;
    check_bounded(&y0, 0.0)?;
    let mut times = Vec::with_capacity(steps + 1);
    let mut ys = Vec::with_capacity(steps + 1);
    times.push(0.0);
    ys.push(y0);
    for k in 0..steps {
        let t = k as f64 * dt;
        let next = rk4_step(&mut f, t, &ys[k], dt)?;
        check_bounded(&next, t)?;
        times.push((k + 1) as f64 * dt);
        ys.push(next);
    }
    Ok((times, ys, dt))
}

/// Same as [`rk4`] but for a flow driven by a sampled curve: the right-hand
/// side receives the interval index and the fraction within it.
fn rk4_along<F>(mut f: F, y0: Vector, curve_len: usize, times: &[f64]) -> Result<Vec<Vector>>
where
    F: FnMut(usize, f64, &Vector) -> Result<Vector>,
{
    check_bounded(&y0, 0.0)?;
    let mut ys = Vec::with_capacity(curve_len);
    ys.push(y0);
    for k in 0..curve_len.saturating_sub(1) {
        let h = times[k + 1] - times[k];
        let y = &ys[k];
        let k1 = f(k, 0.0, y)?;
        let k2 = f(k, 0.5, &(y + &k1 * (0.5 * h)))?;
        let k3 = f(k, 0.5, &(y + &k2 * (0.5 * h)))?;
        let k4 = f(k, 1.0, &(y + &k3 * h))?;
        let next = y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        check_bounded(&next, times[k])?;
        ys.push(next);
    }
    Ok(ys)
}

fn split(y: &Vector, c: usize) -> (Vector, Vector) {
    (y.rows(0, c).into_owned(), y.rows(c, c).into_owned())
}

fn join(a: &Vector, b: &Vector) -> Vector {
    let mut out = Vector::zeros(a.len() + b.len());
    out.rows_mut(0, a.len()).copy_from(a);
    out.rows_mut(a.len(), b.len()).copy_from(b);
    out
}

fn sub_riemannian_field(model: &dyn Submersion, x: &Vector, lambda: &Vector) -> Result<(Vector, Vector)> {
    let n = model.base_dim();
    let frame = model.frame(x);
    let jac = frame_jacobians(model, x)?;
    let mut xdot = Vector::zeros(model.chart_dim());
    let mut ldot = Vector::zeros(model.chart_dim());
    for (i, ji) in jac.iter().enumerate().take(n) {
        let u = lambda.dot(&frame.column(i));
        xdot += frame.column(i) * u;
        ldot -= ji.tr_mul(lambda) * u;
    }
    Ok((xdot, ldot))
}

fn phase_trajectory(times: Vec<f64>, ys: Vec<Vector>, step: f64, c: usize, unit: bool) -> PhaseTrajectory {
    let states = ys
        .iter()
        .map(|y| {
            let (x, lambda) = split(y, c);
            PhaseState { x, lambda, unit_normalized: unit }
        })
        .collect();
    PhaseTrajectory { times, states, step }
}

/// Hamiltonian flow of H = ½ Σ λ(X_i)² from the given state, without rescaling.
pub fn integrate_hamiltonian(
    model: &dyn Submersion,
    state0: &PhaseState,
    t_end: f64,
    h: f64,
) -> Result<PhaseTrajectory> {
    state0.validate(model)?;
    let c = model.chart_dim();
    let (times, ys, step) = rk4(
        |_, y| {
            let (x, l) = split(y, c);
            let (xd, ld) = sub_riemannian_field(model, &x, &l)?;
            Ok(join(&xd, &ld))
        },
        join(&state0.x, &state0.lambda),
        t_end,
        h,
    )?;
    Ok(phase_trajectory(times, ys, step, c, state0.unit_normalized))
}

/// Rescales λ so that |♯λ|_g = 1. Annihilators are returned unchanged.
pub fn normalize_state(model: &dyn Submersion, state: &PhaseState) -> Result<PhaseState> {
    state.validate(model)?;
    let e = energy_unchecked(model, &state.x, &state.lambda);
    // annihilators expanded in chart coordinates keep a rounding-level horizontal part
    if (2.0 * e).sqrt() <= ANNIHILATOR_PAIRING_TOLERANCE * state.lambda.norm().max(1.0) {
        return Ok(PhaseState { unit_normalized: false, ..state.clone() });
    }
    Ok(PhaseState { x: state.x.clone(), lambda: &state.lambda / (2.0 * e).sqrt(), unit_normalized: true })
}

/// Normal sub-Riemannian geodesic from `state0`, parametrized by arc length.
pub fn integrate_normal_geodesic(
    model: &dyn Submersion,
    state0: &PhaseState,
    t_end: f64,
    h: f64,
) -> Result<PhaseTrajectory> {
    integrate_hamiltonian(model, &normalize_state(model, state0)?, t_end, h)
}

/// Base curve π∘γ with velocity dπ(♯λ).
pub fn project_trajectory(model: &dyn Submersion, traj: &PhaseTrajectory) -> Result<SampledCurve> {
    let mut points = Vec::with_capacity(traj.len());
    let mut tangents = Vec::with_capacity(traj.len());
    for st in &traj.states {
        let frame = model.frame(&st.x);
        let n = model.base_dim();
        let h = frame.columns(0, n);
        let sharp = h * (h.transpose() * &st.lambda);
        points.push(model.project(&st.x));
        tangents.push(model.projection_differential(&st.x) * sharp);
    }
    Ok(SampledCurve { times: traj.times.clone(), points, tangents, step: traj.step })
}

/// The horizontal lift of a sampled base curve starting at `x0`.
pub fn horizontal_lift(model: &dyn Submersion, eta: &SampledCurve, x0: &Vector) -> Result<SampledCurve> {
    model.check_point(x0)?;
    if eta.is_empty() {
        return Err(input("base curve has no samples"));
    }
    let mismatch = (model.project(x0) - &eta.points[0]).norm();
    if mismatch > LIFT_BASEPOINT_TOLERANCE {
        return Err(input(format!("π(x0) differs from η(0) by {mismatch:e}")));
    }
    let points = rk4_along(
        |k, s, x| {
            let (_, vel) = if s == 0.0 {
                (eta.points[k].clone(), eta.tangents[k].clone())
            } else if s == 1.0 {
                (eta.points[k + 1].clone(), eta.tangents[k + 1].clone())
            } else {
                eta.hermite(k, s)
            };
            Ok(lift_base_vector(model, x, &vel))
        },
        x0.clone(),
        eta.len(),
        &eta.times,
    )?;
    let tangents = points.iter().zip(&eta.tangents).map(|(x, v)| lift_base_vector(model, x, v)).collect();
    Ok(SampledCurve { times: eta.times.clone(), points, tangents, step: eta.step })
}

/// Riemannian geodesic of N from (y0, v0).
pub fn riemann_geodesic_base(
    model: &dyn Submersion,
    y0: &Vector,
    v0: &Vector,
    t_end: f64,
    h: f64,
) -> Result<SampledCurve> {
    let base = model.base().clone();
    let d = base.chart_dim();
    check_finite_len(y0, d, "base point")?;
    check_finite_len(v0, d, "base vector")?;
    if !(base.norm(y0, v0) > 0.0) {
        return Err(input("initial velocity of a base geodesic must be non-zero"));
    }
    let (times, ys, step) = rk4(
        |_, s| {
            let (y, v) = split(s, d);
            Ok(join(&v, &(-base.christoffel(&y, &v, &v))))
        },
        join(y0, v0),
        t_end,
        h,
    )?;
    let (points, tangents) = ys.iter().map(|s| split(s, d)).unzip();
    Ok(SampledCurve { times, points, tangents, step })
}

fn curve_at(eta: &SampledCurve, k: usize, s: f64) -> (Vector, Vector) {
    if s == 0.0 {
        (eta.points[k].clone(), eta.tangents[k].clone())
    } else if s == 1.0 {
        (eta.points[k + 1].clone(), eta.tangents[k + 1].clone())
    } else {
        eta.hermite(k, s)
    }
}

/// Levi-Civita parallel transport of `x0` along a sampled base curve.
pub fn parallel_transport_base(model: &dyn Submersion, eta: &SampledCurve, x0: &Vector) -> Result<Vec<Vector>> {
    let base = model.base().clone();
    check_finite_len(x0, base.chart_dim(), "base vector")?;
    rk4_along(
        |k, s, field| {
            let (y, vel) = curve_at(eta, k, s);
            Ok(-base.christoffel(&y, &vel, field))
        },
        x0.clone(),
        eta.len(),
        &eta.times,
    )
}

/// Matrix T with ḃ = T b for ▼-parallel annihilator coefficients along a
/// horizontal velocity with frame coefficients `a`:
/// T_kl = Σ_i a_i θ_l([X_i, V_k]).
pub fn annihilator_transport_matrix(model: &dyn Submersion, x: &Vector, a: &Vector) -> Result<Matrix> {
    let n = model.base_dim();
    let rank = model.dim() - n;
    let theta = coframe(model, x)?;
    let mut t = Matrix::zeros(rank, rank);
    for k in 0..rank {
        let mut br = Vector::zeros(model.chart_dim());
        for (i, ai) in a.iter().enumerate() {
            if *ai != 0.0 {
                br += bracket(model, x, i, n + k)? * *ai;
            }
        }
        for l in 0..rank {
            t[(k, l)] = theta.column(n + l).dot(&br);
        }
    }
    Ok(t)
}

/// ▼-transport of β₀ along a horizontal curve γ in M.
pub fn black_triangle_transport(
    model: &dyn Submersion,
    gamma: &SampledCurve,
    beta0: &AnnihilatorCovector,
) -> Result<Vec<AnnihilatorCovector>> {
    let n = model.base_dim();
    let rank = model.dim() - n;
    check_finite_len(&beta0.coeffs, rank, "annihilator coefficients")?;
    for (x, v) in gamma.points.iter().zip(&gamma.tangents) {
        let theta = coframe(model, x)?;
        let vert = theta.columns(n, rank).tr_mul(v);
        if vert.amax() > HORIZONTALITY_TOLERANCE * v.norm().max(1.0) {
            return Err(input(format!("curve is not horizontal: vertical component {:e}", vert.amax())));
        }
    }
    let coeffs = rk4_along(
        |k, s, b| {
            let (x, vel) = curve_at(gamma, k, s);
            let theta = coframe(model, &x)?;
            let a = theta.columns(0, n).tr_mul(&vel);
            Ok(annihilator_transport_matrix(model, &x, &a)? * b)
        },
        beta0.coeffs.clone(),
        gamma.len(),
        &gamma.times,
    )?;
    Ok(coeffs.into_iter().map(AnnihilatorCovector::new).collect())
}

/// Geodesic of the extended Riemannian metric: Hamiltonian flow of ½ λᵀ g*_M λ.
pub fn integrate_extended_geodesic(
    model: &dyn Submersion,
    metric: &ExtendedCometric,
    state0: &PhaseState,
    t_end: f64,
    h: f64,
) -> Result<PhaseTrajectory> {
    state0.validate(model)?;
    let c = model.chart_dim();
    let (times, ys, step) = rk4(
        |_, y| {
            let (x, l) = split(y, c);
            let (xd, ld) = metric.hamiltonian_field(model, &x, &l)?;
            Ok(join(&xd, &ld))
        },
        join(&state0.x, &state0.lambda),
        t_end,
        h,
    )?;
    for y in &ys {
        let (x, _) = split(y, c);
        let min = metric.min_eigenvalue(model, &x)?;
        if !(min > crate::extension::NONDEGENERACY_THRESHOLD) {
            return Err(geometry(format!("extended cometric lost positive-definiteness (λ_min = {min:e})")));
        }
    }
    Ok(phase_trajectory(times, ys, step, c, state0.unit_normalized))
}
