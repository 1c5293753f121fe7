//! Verification of the characterization conditions: constant length and
//! parallelism of J_β η̇ along lifted base geodesics, J² identities, the
//! vanishing of ∇R and related pairings, the local condition on dθ_k, and
//! the curvature identity R(u,v)²w = −|R(u,v)w|² w on the base.

use nalgebra::SymmetricEigen;

use crate::error::{geometry, Error, Result};
use crate::extension::ExtendedCometric;
use crate::flows::{
    annihilator_transport_matrix, black_triangle_transport, horizontal_lift, parallel_transport_base,
    riemann_geodesic_base,
};
use crate::geometry::{
    base_coords, base_frame, check_finite_len, curvature_form, horizontal_coords, j_operator, lift_base_vector,
    vertical_vector, AnnihilatorCovector, JOperator, Submersion,
};
use crate::report::{CheckReport, Witness};
use crate::sampling::Probe;
use crate::{Matrix, Vector};

pub const DEFAULT_TOL_ALGEBRAIC: f64 = 1e-10;
pub const DEFAULT_TOL_NUMERIC: f64 = 1e-5;

/// Half-width of the transport used to difference R.
pub const COV_DERIV_STEP: f64 = 1e-4;

/// Gram–Schmidt remainders shorter than this leave nothing to test.
const VACUOUS_NORM: f64 = 1e-12;

struct TransportState {
    x: Vector,
    y: Vector,
    ydot: Vector,
    frame: Vec<Vector>,
    coframe: Matrix,
}

impl TransportState {
    fn pack(&self) -> Vector {
        let mut parts: Vec<f64> = Vec::new();
        parts.extend(self.x.iter());
        parts.extend(self.y.iter());
        parts.extend(self.ydot.iter());
        for a in &self.frame {
            parts.extend(a.iter());
        }
        parts.extend(self.coframe.iter());
        Vector::from_vec(parts)
    }

    fn unpack(v: &Vector, c: usize, d: usize, n: usize, rank: usize) -> Self {
        let mut off = 0;
        let mut take = |len: usize| {
            let s = v.rows(off, len).into_owned();
            off += len;
            s
        };
        let x = take(c);
        let y = take(d);
        let ydot = take(d);
        let frame = (0..n).map(|_| take(d)).collect();
        let coframe = Matrix::from_column_slice(rank, rank, take(rank * rank).as_slice());
        Self { x, y, ydot, frame, coframe }
    }
}

/// Transports x, a base frame, and the vertical coframe along the horizontal
/// lift of the base geodesic with velocity `v`, for time `t`.
fn transport(model: &dyn Submersion, start: &TransportState, t: f64) -> Result<TransportState> {
    let base = model.base();
    let (c, d, n) = (model.chart_dim(), base.chart_dim(), model.base_dim());
    let rank = model.dim() - n;
    let rhs = |s: &Vector| -> Result<Vector> {
        let st = TransportState::unpack(s, c, d, n, rank);
        let a = base_coords(model, &st.x, &st.ydot);
        let t = annihilator_transport_matrix(model, &st.x, &a)?;
        Ok(TransportState {
            x: lift_base_vector(model, &st.x, &st.ydot),
            y: st.ydot.clone(),
            ydot: -base.christoffel(&st.y, &st.ydot, &st.ydot),
            frame: st.frame.iter().map(|f| -base.christoffel(&st.y, &st.ydot, f)).collect(),
            coframe: &st.coframe * t.transpose(),
        }
        .pack())
    };
    let y0 = start.pack();
    let k1 = rhs(&y0)?;
    let k2 = rhs(&(&y0 + &k1 * (0.5 * t)))?;
    let k3 = rhs(&(&y0 + &k2 * (0.5 * t)))?;
    let k4 = rhs(&(&y0 + &k3 * t))?;
    let out = &y0 + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (t / 6.0);
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("covariant-derivative transport produced non-finite values".into()));
    }
    Ok(TransportState::unpack(&out, c, d, n, rank))
}

/// θ_l R(a_i, a_j) for the transported frames, as one n×n matrix per l.
fn pulled_back_curvature(model: &dyn Submersion, st: &TransportState) -> Result<Vec<Matrix>> {
    let form = curvature_form(model, &st.x)?;
    let n = model.base_dim();
    let rank = model.dim() - n;
    let coords: Vec<Vector> = st.frame.iter().map(|a| base_coords(model, &st.x, a)).collect();
    let mut out = vec![Matrix::zeros(n, n); rank];
    for i in 0..n {
        for j in (i + 1)..n {
            let r = form.apply(&coords[i], &coords[j]);
            for (l, ol) in out.iter_mut().enumerate() {
                let val = st.coframe.row(l).transpose().dot(&r);
                ol[(i, j)] = val;
                ol[(j, i)] = -val;
            }
        }
    }
    Ok(out)
}

/// Components θ_k((∇_v R)(X_i, X_j)) at x for a base tangent vector v at π(x),
/// one n×n matrix per vertical index k.
///
/// The base frame and the vertical coframe are transported along the
/// horizontal lift of the geodesic through π(x) with velocity v to ±h; R is
/// evaluated on the transported data and centrally differenced.
pub fn cov_deriv_r_tensor(model: &dyn Submersion, x: &Vector, v: &Vector) -> Result<Vec<Matrix>> {
    model.check_point(x)?;
    let base = model.base();
    check_finite_len(v, base.chart_dim(), "base vector")?;
    let n = model.base_dim();
    let rank = model.dim() - n;
    let y = model.project(x);
    let speed = base.norm(&y, v);
    if speed == 0.0 {
        return Ok(vec![Matrix::zeros(n, n); rank]);
    }
    let e = base_frame(model, x);
    let start = |sign: f64| TransportState {
        x: x.clone(),
        y: y.clone(),
        ydot: v * (sign / speed),
        frame: (0..n).map(|i| e.column(i).into_owned()).collect(),
        coframe: Matrix::identity(rank, rank),
    };
    let plus = pulled_back_curvature(model, &transport(model, &start(1.0), COV_DERIV_STEP)?)?;
    let minus = pulled_back_curvature(model, &transport(model, &start(-1.0), COV_DERIV_STEP)?)?;
    Ok(plus.iter().zip(&minus).map(|(p, m)| (p - m) * (speed / (2.0 * COV_DERIV_STEP))).collect())
}

/// (∇_v R)(a, b) for horizontal chart vectors, as a vertical chart vector.
pub fn cov_deriv_r(model: &dyn Submersion, x: &Vector, v: &Vector, a: &Vector, b: &Vector) -> Result<Vector> {
    for w in [v, a, b] {
        check_finite_len(w, model.chart_dim(), "vector")?;
    }
    let vb = model.projection_differential(x) * v;
    let tensor = cov_deriv_r_tensor(model, x, &vb)?;
    let ca = horizontal_coords(model, x, a)?;
    let cb = horizontal_coords(model, x, b)?;
    let coeffs = Vector::from_iterator(tensor.len(), tensor.iter().map(|t| ca.dot(&(t * &cb))));
    Ok(vertical_vector(model, x, &coeffs))
}

/// Data along the horizontal lift of the base geodesic from (π(x), v):
/// J_{β(t)} in the frame at γ(t) and the frame coordinates of η̇(t).
struct LiftedProbe {
    eta: crate::flows::SampledCurve,
    gamma: crate::flows::SampledCurve,
    js: Vec<JOperator>,
    velocity_coords: Vec<Vector>,
}

fn lifted_probe(model: &dyn Submersion, probe: &Probe, t_end: f64, h: f64) -> Result<LiftedProbe> {
    let eta = riemann_geodesic_base(model, &model.project(&probe.x), &probe.v, t_end, h)?;
    let gamma = horizontal_lift(model, &eta, &probe.x)?;
    let betas = black_triangle_transport(model, &gamma, &probe.alpha)?;
    let mut js = Vec::with_capacity(eta.len());
    let mut velocity_coords = Vec::with_capacity(eta.len());
    for ((x, beta), ydot) in gamma.points.iter().zip(&betas).zip(&eta.tangents) {
        js.push(JOperator::from_curvature(&curvature_form(model, x)?, beta));
        velocity_coords.push(base_coords(model, x, ydot));
    }
    Ok(LiftedProbe { eta, gamma, js, velocity_coords })
}

fn probe_witness(probe: &Probe, residual: f64) -> Witness {
    Witness::new(&probe.x, &probe.alpha.coeffs, &probe.v, residual)
}

/// max_t | |J_{β(t)} η̇(t)| − |J_α v| | along the lifted base geodesic.
pub fn check_theorem1(model: &dyn Submersion, probe: &Probe, t_end: f64, h: f64, tol: f64) -> Result<CheckReport> {
    let lp = lifted_probe(model, probe, t_end, h)?;
    let target = lp.js[0].apply(&lp.velocity_coords[0]).norm();
    let residual =
        lp.js.iter().zip(&lp.velocity_coords).map(|(j, c)| (j.apply(c).norm() - target).abs()).fold(0.0, f64::max);
    Ok(CheckReport::from_witnesses("theorem1", tol, [probe_witness(probe, residual)]))
}

/// max_t |J_{β(t)} η̇(t) − P_t(J_α v)| with P_t parallel transport along η.
pub fn check_theorem2_parallel(
    model: &dyn Submersion,
    probe: &Probe,
    t_end: f64,
    h: f64,
    tol: f64,
) -> Result<CheckReport> {
    let lp = lifted_probe(model, probe, t_end, h)?;
    let field = |k: usize| base_frame(model, &lp.gamma.points[k]) * lp.js[k].apply(&lp.velocity_coords[k]);
    let transported = parallel_transport_base(model, &lp.eta, &field(0))?;
    let residual = transported.iter().enumerate().map(|(k, p)| (field(k) - p).norm()).fold(0.0, f64::max);
    Ok(CheckReport::from_witnesses("theorem2-parallel", tol, [probe_witness(probe, residual)]))
}

/// |J_α²v + |J_α v|² v| for a unit base vector v.
pub fn check_j2(model: &dyn Submersion, x: &Vector, alpha: &AnnihilatorCovector, v: &Vector) -> Result<f64> {
    let j = j_operator(model, x, alpha)?;
    let c = base_coords(model, x, v);
    let jv = j.apply(&c);
    Ok((j.apply(&jv) + &c * jv.norm_squared()).norm())
}

/// |⟨J_α v, J_α w⟩| after projecting w onto the complement of span{v, J_α v}.
pub fn check_rvrw_orthogonality(
    model: &dyn Submersion,
    x: &Vector,
    alpha: &AnnihilatorCovector,
    v: &Vector,
    w: &Vector,
) -> Result<f64> {
    let j = j_operator(model, x, alpha)?;
    let cv = base_coords(model, x, v);
    if cv.norm() < VACUOUS_NORM {
        return Ok(0.0);
    }
    let cv = cv.normalize();
    let jv = j.apply(&cv);
    let mut basis = vec![cv.clone()];
    let jv_perp = &jv - &cv * cv.dot(&jv);
    if jv_perp.norm() > VACUOUS_NORM {
        basis.push(jv_perp.normalize());
    }
    let mut cw = base_coords(model, x, w);
    for b in &basis {
        cw -= b * b.dot(&cw);
    }
    if cw.norm() < VACUOUS_NORM {
        return Ok(0.0);
    }
    Ok(jv.dot(&j.apply(&cw.normalize())).abs())
}

/// |⟨αR(v, ·), α(∇_v R)(v, ·)⟩_{g*}| for a base vector v at π(x).
pub fn check_dot_kappa(model: &dyn Submersion, x: &Vector, alpha: &AnnihilatorCovector, v: &Vector) -> Result<f64> {
    let c = base_coords(model, x, v);
    let p = curvature_form(model, x)?.pair(alpha);
    let tensor = cov_deriv_r_tensor(model, x, v)?;
    let mut q = Matrix::zeros(c.len(), c.len());
    for (b, t) in alpha.coeffs.iter().zip(&tensor) {
        q += t * *b;
    }
    Ok(p.tr_mul(&c).dot(&q.tr_mul(&c)).abs())
}

fn symmetric_norm(m: Matrix) -> f64 {
    let sym = (&m + m.transpose()) * 0.5;
    SymmetricEigen::new(sym).eigenvalues.iter().fold(0.0, |acc: f64, e| acc.max(e.abs()))
}

/// Operator-norm residuals of J_α² = −|α|² Id and
/// J_α J_β + J_β J_α = −2⟨α, β⟩ Id, with norms from the extended cometric.
pub fn check_htype(
    model: &dyn Submersion,
    metric: &ExtendedCometric,
    x: &Vector,
    alpha: &AnnihilatorCovector,
    beta: &AnnihilatorCovector,
    tol: f64,
) -> Result<CheckReport> {
    let g = metric.vertical_block(model, x)?;
    let min = SymmetricEigen::new(g.clone()).eigenvalues.min();
    if !(min > crate::extension::NONDEGENERACY_THRESHOLD) {
        return Err(geometry(format!("extended cometric is degenerate at x (λ_min = {min:e})")));
    }
    let n = model.base_dim();
    let id = Matrix::identity(n, n);
    let ja = j_operator(model, x, alpha)?;
    let jb = j_operator(model, x, beta)?;
    let aa = alpha.coeffs.dot(&(&g * &alpha.coeffs));
    let ab = alpha.coeffs.dot(&(&g * &beta.coeffs));
    let square = symmetric_norm(ja.square() + &id * aa);
    let polar = symmetric_norm(ja.matrix() * jb.matrix() + jb.matrix() * ja.matrix() + &id * (2.0 * ab));
    let w = Witness::new(x, &alpha.coeffs, &beta.coeffs, square.max(polar));
    Ok(CheckReport::from_witnesses("htype", tol, [w]))
}

/// With A_k = dθ_k restricted to 𝒟 (= −r^k), −A_k² must be diagonal and
/// positive semi-definite. The residual adds the off-diagonal entries and the
/// negative eigenvalues of every −A_k².
pub fn local_condition_d_residual(model: &dyn Submersion, x: &Vector) -> Result<f64> {
    let form = curvature_form(model, x)?;
    let mut residual = 0.0;
    for k in 0..form.vertical_rank() {
        let a = -form.component(k);
        let m = -(&a * &a);
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if i != j {
                    residual += m[(i, j)].abs();
                }
            }
        }
        let sym = (&m + m.transpose()) * 0.5;
        residual += SymmetricEigen::new(sym).eigenvalues.iter().map(|e| (-e).max(0.0)).sum::<f64>();
    }
    Ok(residual)
}

pub fn check_local_condition_d(model: &dyn Submersion, x: &Vector, tol: f64) -> Result<CheckReport> {
    model.check_point(x)?;
    let r = local_condition_d_residual(model, x)?;
    Ok(CheckReport::from_witnesses("local-condition-d", tol, [Witness::at_point(x, r)]))
}

/// R(u,v)w = k(⟨v,w⟩u − ⟨u,w⟩v): the curvature of a space of constant
/// sectional curvature k.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantCurvature {
    pub k: f64,
}

impl ConstantCurvature {
    pub fn apply(&self, u: &Vector, v: &Vector, w: &Vector) -> Vector {
        (u * v.dot(w) - v * u.dot(w)) * self.k
    }
}

/// |R(u,v)R(u,v)w + |R(u,v)w|² w| for a curvature operator with Euclidean
/// inner product on its arguments.
pub fn check_r2<F>(curvature: F, u: &Vector, v: &Vector, w: &Vector) -> f64
where
    F: Fn(&Vector, &Vector, &Vector) -> Vector,
{
    let rw = curvature(u, v, w);
    let rrw = curvature(u, v, &rw);
    (rrw + w * rw.norm_squared()).norm()
}

/// Sweeps of the pointwise checks over fixed-seed probes.
pub mod sweep {
    use super::*;
    use crate::sampling::rng;
    use rand_distr::{Distribution, StandardNormal};

    fn collect<F>(name: &str, tol: f64, probes: &[Probe], mut f: F) -> Result<CheckReport>
    where
        F: FnMut(&Probe) -> Result<Witness>,
    {
        let ws = probes.iter().map(&mut f).collect::<Result<Vec<_>>>()?;
        Ok(CheckReport::from_witnesses(name, tol, ws))
    }

    pub fn theorem1(model: &dyn Submersion, probes: &[Probe], t_end: f64, h: f64, tol: f64) -> Result<CheckReport> {
        let parts = probes.iter().map(|p| check_theorem1(model, p, t_end, h, tol)).collect::<Result<Vec<_>>>()?;
        Ok(CheckReport::merge("theorem1", tol, parts))
    }

    pub fn theorem2_parallel(
        model: &dyn Submersion,
        probes: &[Probe],
        t_end: f64,
        h: f64,
        tol: f64,
    ) -> Result<CheckReport> {
        let parts =
            probes.iter().map(|p| check_theorem2_parallel(model, p, t_end, h, tol)).collect::<Result<Vec<_>>>()?;
        Ok(CheckReport::merge("theorem2-parallel", tol, parts))
    }

    pub fn j2(model: &dyn Submersion, probes: &[Probe], tol: f64) -> Result<CheckReport> {
        collect("j2", tol, probes, |p| Ok(probe_witness(p, check_j2(model, &p.x, &p.alpha, &p.v)?)))
    }

    /// w is drawn from the same fixed seed as a second Gaussian direction.
    pub fn rvrw(model: &dyn Submersion, probes: &[Probe], seed: u64, tol: f64) -> Result<CheckReport> {
        let mut r = rng(seed ^ 0xA5A5);
        collect("rvrw-orthogonality", tol, probes, |p| {
            let c = Vector::from_fn(model.base_dim(), |_, _| StandardNormal.sample(&mut r));
            let w = base_frame(model, &p.x) * c;
            Ok(probe_witness(p, check_rvrw_orthogonality(model, &p.x, &p.alpha, &p.v, &w)?))
        })
    }

    pub fn dot_kappa(model: &dyn Submersion, probes: &[Probe], tol: f64) -> Result<CheckReport> {
        collect("dot-kappa", tol, probes, |p| Ok(probe_witness(p, check_dot_kappa(model, &p.x, &p.alpha, &p.v)?)))
    }

    /// max over probes of the largest |θ_k(∇_v R)(X_i, X_j)|.
    pub fn cov_deriv_r(model: &dyn Submersion, probes: &[Probe], tol: f64) -> Result<CheckReport> {
        collect("cov-deriv-r", tol, probes, |p| {
            let t = cov_deriv_r_tensor(model, &p.x, &p.v)?;
            let worst = t.iter().map(|m| m.amax()).fold(0.0, f64::max);
            Ok(Witness::new(&p.x, &Vector::zeros(0), &p.v, worst))
        })
    }

    /// β is taken from the next probe in the list.
    pub fn htype(model: &dyn Submersion, metric: &ExtendedCometric, probes: &[Probe], tol: f64) -> Result<CheckReport> {
        let parts = probes
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let beta = &probes[(i + 1) % probes.len()].alpha;
                check_htype(model, metric, &p.x, &p.alpha, beta, tol)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CheckReport::merge("htype", tol, parts))
    }

    pub fn local_condition_d(model: &dyn Submersion, probes: &[Probe], tol: f64) -> Result<CheckReport> {
        collect("local-condition-d", tol, probes, |p| {
            Ok(Witness::at_point(&p.x, local_condition_d_residual(model, &p.x)?))
        })
    }

    /// Random unit u, v, w tangent to the base at π(x).
    pub fn base_r2(model: &dyn Submersion, probes: &[Probe], seed: u64, tol: f64) -> Result<CheckReport> {
        let curv = ConstantCurvature { k: model.base().sectional_curvature() };
        let mut r = rng(seed ^ 0x5A5A);
        collect("base-r2", tol, probes, |p| {
            let e = base_frame(model, &p.x);
            let mut unit =
                || (&e * Vector::from_fn(model.base_dim(), |_, _| StandardNormal.sample(&mut r))).normalize();
            let (u, v, w) = (unit(), unit(), unit());
            Ok(Witness::new(
                &model.project(&p.x),
                &Vector::zeros(0),
                &w,
                check_r2(|a, b, c| curv.apply(a, b, c), &u, &v, &w),
            ))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{self, CarnotStep2, StructureConstants};
    use crate::sampling;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    fn ann(xs: &[f64]) -> AnnihilatorCovector {
        AnnihilatorCovector::new(v(xs))
    }

    #[test]
    fn cov_deriv_r_vanishes_on_built_in_models() {
        for model in models::built_in() {
            let m = model.as_ref();
            for p in sampling::probes(m, 10, 3) {
                let t = cov_deriv_r_tensor(m, &p.x, &p.v).unwrap();
                let worst = t.iter().map(|q| q.amax()).fold(0.0, f64::max);
                let tol = if m.name() == "hopf" { 1e-5 } else { 1e-6 };
                assert!(worst < tol, "{}: {worst}", m.name());
            }
        }
        let h = models::heisenberg();
        let x = v(&[0.2, 0.1, 0.0]);
        let zero = cov_deriv_r(&h, &x, &v(&[0.0; 3]), &v(&[1.0, 0.0, -0.05]), &v(&[0.0, 1.0, 0.1])).unwrap();
        assert_eq!(zero.norm(), 0.0);
    }

    #[test]
    fn theorem_checks_on_heisenberg_and_hopf() {
        let h = models::heisenberg();
        for p in sampling::probes(&h, 5, 1) {
            assert!(check_theorem1(&h, &p, 3.0, 1e-2, 1e-8).unwrap().pass);
            assert!(check_theorem2_parallel(&h, &p, 3.0, 1e-2, 1e-8).unwrap().pass);
        }
        let hopf = models::hopf();
        for p in sampling::probes(&hopf, 5, 1) {
            assert!(check_theorem1(&hopf, &p, 3.0, 1e-3, 1e-6).unwrap().pass);
            assert!(check_theorem2_parallel(&hopf, &p, 3.0, 1e-3, 1e-5).unwrap().pass);
            let zero = Probe { alpha: AnnihilatorCovector::zeros(1), ..p };
            assert_eq!(check_theorem1(&hopf, &zero, 1.0, 1e-2, 1e-8).unwrap().max_residual, 0.0);
        }
        let prod = models::product_heisenberg();
        for p in sampling::probes(&prod, 5, 1) {
            assert!(check_theorem2_parallel(&prod, &p, 3.0, 1e-2, 1e-8).unwrap().pass);
        }
    }

    #[test]
    fn j2_examples() {
        let h = models::heisenberg();
        let x = v(&[0.4, -1.0, 2.0]);
        let unit = v(&[0.6, -0.8]);
        assert!(check_j2(&h, &x, &ann(&[3.0]), &unit).unwrap() < 1e-14);
        let p = models::product_heisenberg();
        let x = Vector::zeros(6);
        let s = 0.5f64.sqrt();
        // α = Z*, v = (X + X̂)/√2: J²v + |Jv|²v = (−1/(2√2), 0, 1/(2√2), 0)
        let r = check_j2(&p, &x, &ann(&[1.0, 0.0]), &v(&[s, 0.0, s, 0.0])).unwrap();
        assert!((r - 0.5).abs() < 1e-15);
        // α = dz + 2dẑ with the same mixed v
        let r = check_j2(&p, &x, &ann(&[1.0, 2.0]), &v(&[s, 0.0, s, 0.0])).unwrap();
        assert!((r - 1.5).abs() < 1e-14);
        assert!(check_j2(&p, &x, &ann(&[1.0, 0.0]), &v(&[1.0, 0.0, 0.0, 0.0])).unwrap() < 1e-15);
    }

    #[test]
    fn rvrw_examples() {
        let h = models::heisenberg();
        let x = Vector::zeros(3);
        assert_eq!(check_rvrw_orthogonality(&h, &x, &ann(&[1.0]), &v(&[1.0, 0.0]), &v(&[0.3, 0.9])).unwrap(), 0.0);
        let p = models::product_heisenberg();
        let x = Vector::zeros(6);
        let z = ann(&[1.0, 0.0]);
        let r = check_rvrw_orthogonality(&p, &x, &z, &v(&[1.0, 0.0, 0.0, 0.0]), &v(&[0.0, 0.0, 1.0, 0.0])).unwrap();
        assert_eq!(r, 0.0);
        let s = 0.5f64.sqrt();
        let r = check_rvrw_orthogonality(&p, &x, &z, &v(&[s, 0.0, s, 0.0]), &v(&[s, 0.0, -s, 0.0])).unwrap();
        assert!((r - 0.5).abs() < 1e-15);
        let q = models::quaternionic_htype();
        for pr in sampling::probes(&q, 20, 9) {
            let w = base_frame(&q, &pr.x) * v(&[0.3, -1.0, 0.2, 0.7]);
            assert!(check_rvrw_orthogonality(&q, &pr.x, &pr.alpha, &pr.v, &w).unwrap() < 1e-10);
        }
    }

    #[test]
    fn dot_kappa_vanishes() {
        for model in models::built_in() {
            for p in sampling::probes(model.as_ref(), 5, 2) {
                assert!(check_dot_kappa(model.as_ref(), &p.x, &p.alpha, &p.v).unwrap() < 1e-5);
            }
            let p = &sampling::probes(model.as_ref(), 1, 2)[0];
            let zero = AnnihilatorCovector::zeros(p.alpha.coeffs.len());
            assert_eq!(check_dot_kappa(model.as_ref(), &p.x, &zero, &p.v).unwrap(), 0.0);
        }
    }

    #[test]
    fn htype_examples() {
        let h = models::heisenberg();
        let g = ExtendedCometric::default();
        let rep = check_htype(&h, &g, &Vector::zeros(3), &ann(&[1.0]), &ann(&[-2.0]), 1e-10).unwrap();
        assert!(rep.pass, "{}", rep.max_residual);
        let q = models::quaternionic_htype();
        for p in sampling::probes(&q, 20, 4) {
            let beta = sampling::annihilator(&q, &mut sampling::rng(p.x[0].to_bits()));
            assert!(check_htype(&q, &g, &p.x, &p.alpha, &beta, 1e-10).unwrap().pass);
        }
        let p = models::product_heisenberg();
        let rep = check_htype(&p, &g, &Vector::zeros(6), &ann(&[1.0, 0.0]), &ann(&[0.0, 1.0]), 1e-10).unwrap();
        assert!(!rep.pass && rep.max_residual >= 0.5);
    }

    #[test]
    fn local_condition_d_examples() {
        let x = Vector::zeros(3);
        assert!(check_local_condition_d(&models::heisenberg(), &x, 1e-10).unwrap().pass);
        assert!(check_local_condition_d(&models::product_heisenberg(), &Vector::zeros(6), 1e-10).unwrap().pass);
        let c = StructureConstants::from_entries(3, 1, &[(0, 0, 1, 1.0), (0, 0, 2, 1.0)]).unwrap();
        let m = CarnotStep2::new("skewed", c).unwrap();
        let rep = check_local_condition_d(&m, &Vector::zeros(4), 1e-10).unwrap();
        assert!(!rep.pass && rep.max_residual >= 2.0);
    }

    #[test]
    fn r2_examples() {
        let c = ConstantCurvature { k: 1.0 };
        let (u, w) = (v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0]));
        let f = |a: &Vector, b: &Vector, d: &Vector| c.apply(a, b, d);
        assert!(check_r2(f, &u, &w, &u) < 1e-15);
        assert_eq!(check_r2(f, &u, &w, &v(&[0.0, 0.0, 1.0])), 0.0);
        let mixed = v(&[1.0, 0.0, 1.0]).normalize();
        assert!(check_r2(f, &u, &w, &mixed) > 0.1);
        assert_eq!(check_r2(|_, _, d| d * 0.0, &u, &w, &u), 0.0);
    }
}
