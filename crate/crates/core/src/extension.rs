//! The canonical Riemannian extension of the sub-Riemannian metric.
//!
//! On covectors, ⟨α, β⟩_{g*_M} = ⟨α, β⟩_{g*} + c ⟨R*α, R*β⟩_{g*} with c = 2/n
//! unless overridden, where the two-form product sums over i < j in the
//! orthonormal horizontal frame. In the adapted coframe (θ_i, θ_{n+k}) the
//! matrix is block diagonal: the identity on 𝒟* and c Σ_{i<j} r_ij r_ijᵀ on
//! Ann(𝒟), with (r_ij)_k = θ_k(R(X_i, X_j)).

use nalgebra::{SymmetricEigen, SVD};

use crate::error::{input, Result};
use crate::flows::{integrate_extended_geodesic, integrate_normal_geodesic, normalize_state, SampledCurve};
use crate::geometry::{
    curvature_form, frame_jacobians, j_operator, AnnihilatorCovector, BracketMode, PhaseState, Submersion, FD_STEP,
};
use crate::report::{CheckReport, Witness};
use crate::{Matrix, Vector};

/// Eigenvalues at or below this count as degenerate.
pub const NONDEGENERACY_THRESHOLD: f64 = 1e-10;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ExtendedCometric {
    constant: Option<f64>,
}

impl ExtendedCometric {
    /// Replaces the normalization 2/n by another positive constant.
    pub fn with_constant(c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(input(format!("normalization constant must be positive, got {c}")));
        }
        Ok(Self { constant: Some(c) })
    }

    pub fn constant(&self, model: &dyn Submersion) -> f64 {
        self.constant.unwrap_or(2.0 / model.base_dim() as f64)
    }

    /// The vectors r_ij for i < j.
    fn pair_vectors(model: &dyn Submersion, x: &Vector) -> Result<Vec<(usize, usize, Vector)>> {
        let form = curvature_form(model, x)?;
        let n = model.base_dim();
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                out.push((i, j, Vector::from_fn(form.vertical_rank(), |k, _| form.get(k, i, j))));
            }
        }
        Ok(out)
    }

    /// Matrix on Ann(𝒟) in the coefficients b_k of the vertical coframe.
    pub fn vertical_block(&self, model: &dyn Submersion, x: &Vector) -> Result<Matrix> {
        let rank = model.dim() - model.base_dim();
        let c = self.constant(model);
        let mut g = Matrix::zeros(rank, rank);
        for (_, _, r) in Self::pair_vectors(model, x)? {
            g += &r * r.transpose() * c;
        }
        Ok(g)
    }

    /// m×m matrix in the adapted coframe θ₁..θ_m.
    pub fn adapted(&self, model: &dyn Submersion, x: &Vector) -> Result<Matrix> {
        let n = model.base_dim();
        let m = model.dim();
        let mut g = Matrix::zeros(m, m);
        g.view_mut((0, 0), (n, n)).fill_with_identity();
        g.view_mut((n, n), (m - n, m - n)).copy_from(&self.vertical_block(model, x)?);
        Ok(g)
    }

    /// Matrix acting on chart covectors: Σ X_i X_iᵀ + c Σ_{i<j} R_ij R_ijᵀ.
    pub fn chart_matrix(&self, model: &dyn Submersion, x: &Vector) -> Result<Matrix> {
        let frame = model.frame(x);
        let h = frame.columns(0, model.base_dim());
        let mut g = h * h.transpose();
        let c = self.constant(model);
        for r in self.curvature_fields(model, x)? {
            g += &r * r.transpose() * c;
        }
        Ok(g)
    }

    /// R(X_i, X_j) as chart vectors, i < j.
    fn curvature_fields(&self, model: &dyn Submersion, x: &Vector) -> Result<Vec<Vector>> {
        let n = model.base_dim();
        let vert = model.frame(x).columns(n, model.dim() - n).into_owned();
        Ok(Self::pair_vectors(model, x)?.into_iter().map(|(_, _, r)| &vert * r).collect())
    }

    /// Jacobians of the fields R(X_i, X_j), i < j.
    fn curvature_field_jacobians(&self, model: &dyn Submersion, x: &Vector) -> Result<Vec<Matrix>> {
        let n = model.base_dim();
        if model.bracket_mode() == BracketMode::Analytic {
            if let Some(s) = model.structure() {
                let jac = frame_jacobians(model, x)?;
                let mut out = Vec::new();
                for i in 0..n {
                    for j in (i + 1)..n {
                        let mut d = Matrix::zeros(model.chart_dim(), model.chart_dim());
                        for (k, jk) in jac.iter().enumerate().skip(n) {
                            let coef = s.get(k, i, j);
                            if coef != 0.0 {
                                d += jk * coef;
                            }
                        }
                        out.push(d);
                    }
                }
                return Ok(out);
            }
        }
        let c = model.chart_dim();
        let pairs = n * (n - 1) / 2;
        let mut out = vec![Matrix::zeros(c, c); pairs];
        for col in 0..c {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[col] += FD_STEP;
            xm[col] -= FD_STEP;
            let fp = self.curvature_fields(model, &xp)?;
            let fm = self.curvature_fields(model, &xm)?;
            for (o, (p, m)) in out.iter_mut().zip(fp.iter().zip(&fm)) {
                o.set_column(col, &((p - m) / (xp[col] - xm[col])));
            }
        }
        Ok(out)
    }

    /// ½ λᵀ g*_M λ.
    pub fn energy(&self, model: &dyn Submersion, x: &Vector, lambda: &Vector) -> Result<f64> {
        Ok(0.5 * lambda.dot(&(self.chart_matrix(model, x)? * lambda)))
    }

    /// Hamilton's equations of ½ λᵀ g*_M λ: returns (ẋ, λ̇).
    pub fn hamiltonian_field(&self, model: &dyn Submersion, x: &Vector, lambda: &Vector) -> Result<(Vector, Vector)> {
        let n = model.base_dim();
        let c = self.constant(model);
        let frame = model.frame(x);
        let jac = frame_jacobians(model, x)?;
        let fields = self.curvature_fields(model, x)?;
        let field_jac = self.curvature_field_jacobians(model, x)?;
        let mut xdot = Vector::zeros(model.chart_dim());
        let mut ldot = Vector::zeros(model.chart_dim());
        for (i, ji) in jac.iter().enumerate().take(n) {
            let u = lambda.dot(&frame.column(i));
            xdot += frame.column(i) * u;
            ldot -= ji.tr_mul(lambda) * u;
        }
        for (r, dr) in fields.iter().zip(&field_jac) {
            let rho = lambda.dot(r) * c;
            xdot += r * rho;
            ldot -= dr.tr_mul(lambda) * rho;
        }
        Ok((xdot, ldot))
    }

    pub fn min_eigenvalue(&self, model: &dyn Submersion, x: &Vector) -> Result<f64> {
        Ok(SymmetricEigen::new(self.adapted(model, x)?).eigenvalues.min())
    }

    /// |α|² for an annihilator.
    pub fn annihilator_norm_squared(
        &self,
        model: &dyn Submersion,
        x: &Vector,
        alpha: &AnnihilatorCovector,
    ) -> Result<f64> {
        Ok(alpha.coeffs.dot(&(self.vertical_block(model, x)? * &alpha.coeffs)))
    }
}

/// Residual −λ_min of the adapted matrix, judged against −threshold so that a
/// pass means positive-definite; the witness carries the weakest direction.
pub fn check_nondegenerate(
    model: &dyn Submersion,
    metric: &ExtendedCometric,
    points: &[Vector],
) -> Result<CheckReport> {
    let ws = points
        .iter()
        .map(|x| {
            let eig = SymmetricEigen::new(metric.adapted(model, x)?);
            let k = eig.eigenvalues.imin();
            let dir = eig.eigenvectors.column(k).into_owned();
            Ok(Witness::new(x, &Vector::zeros(0), &dir, -eig.eigenvalues[k]))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CheckReport::from_witnesses("nondegenerate", -NONDEGENERACY_THRESHOLD, ws))
}

/// Smallest singular value of the vertical coefficients of {R(X_i, X_j)},
/// negated: {X_i} ∪ {R(X_i, X_j)} spans TM exactly when it is positive.
/// Failing witnesses carry an annihilator direction missed by every R(X_i, X_j).
pub fn step2_residual(model: &dyn Submersion, x: &Vector) -> Result<(f64, Vector)> {
    let rank = model.dim() - model.base_dim();
    let mut cols: Vec<Vector> = ExtendedCometric::pair_vectors(model, x)?.into_iter().map(|(_, _, r)| r).collect();
    // zero columns keep the matrix wide enough to expose every missed direction
    while cols.len() < rank {
        cols.push(Vector::zeros(rank));
    }
    let m = Matrix::from_columns(&cols);
    let svd = SVD::new(m, true, false);
    let k = svd.singular_values.imin();
    let u = svd.u.expect("left singular vectors requested");
    Ok((-svd.singular_values[k], u.column(k).into_owned()))
}

/// Numerical rank of {X_i} ∪ {R(X_i, X_j)} at x.
pub fn step2_rank(model: &dyn Submersion, x: &Vector) -> Result<usize> {
    let cols: Vec<Vector> = ExtendedCometric::pair_vectors(model, x)?.into_iter().map(|(_, _, r)| r).collect();
    if cols.is_empty() {
        return Ok(model.base_dim());
    }
    let sv = SVD::new(Matrix::from_columns(&cols), false, false).singular_values;
    Ok(model.base_dim() + sv.iter().filter(|s| **s > NONDEGENERACY_THRESHOLD).count())
}

pub fn check_step2_decomposition(model: &dyn Submersion, points: &[Vector]) -> Result<CheckReport> {
    let ws = points
        .iter()
        .map(|x| {
            let (r, dir) = step2_residual(model, x)?;
            Ok(Witness::new(x, &dir, &Vector::zeros(0), r))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CheckReport::from_witnesses("step2-decomposition", -NONDEGENERACY_THRESHOLD, ws))
}

/// | |α|²_{g*_M} − (1/n) Σ_i |J_α e_i|² | with the default constant 2/n.
pub fn check_normalization_identity(model: &dyn Submersion, x: &Vector, alpha: &AnnihilatorCovector) -> Result<f64> {
    let norm2 = ExtendedCometric::default().annihilator_norm_squared(model, x, alpha)?;
    let j = j_operator(model, x, alpha)?;
    let mean = j.matrix().norm_squared() / model.base_dim() as f64;
    Ok((norm2 - mean).abs())
}

fn base_curve(
    model: &dyn Submersion,
    metric: Option<&ExtendedCometric>,
    traj: &crate::flows::PhaseTrajectory,
) -> Result<SampledCurve> {
    let mut points = Vec::with_capacity(traj.len());
    let mut tangents = Vec::with_capacity(traj.len());
    for s in &traj.states {
        let xdot = match metric {
            Some(g) => g.hamiltonian_field(model, &s.x, &s.lambda)?.0,
            None => {
                let h = model.frame(&s.x).columns(0, model.base_dim()).into_owned();
                &h * h.tr_mul(&s.lambda)
            }
        };
        points.push(model.project(&s.x));
        tangents.push(model.projection_differential(&s.x) * xdot);
    }
    Ok(SampledCurve { times: traj.times.clone(), points, tangents, step: traj.step })
}

/// Cumulative arc length of a sampled curve, Simpson's rule per interval.
fn arc_lengths(curve: &SampledCurve) -> Vec<f64> {
    let mut s = vec![0.0; curve.len()];
    for k in 1..curve.len() {
        let h = curve.times[k] - curve.times[k - 1];
        let mid = curve.hermite(k - 1, 0.5).1.norm();
        s[k] = s[k - 1] + h * (curve.tangents[k - 1].norm() + 4.0 * mid + curve.tangents[k].norm()) / 6.0;
    }
    s
}

/// Point of `curve` at arc length `target`, interpolating within an interval.
fn at_arc_length(curve: &SampledCurve, lengths: &[f64], target: f64) -> Option<Vector> {
    let last = *lengths.last()?;
    if target > last {
        return None;
    }
    let k = lengths.partition_point(|s| *s <= target).clamp(1, curve.len().max(2) - 1) - 1;
    let span = lengths[k + 1] - lengths[k];
    let frac = if span > 0.0 { ((target - lengths[k]) / span).clamp(0.0, 1.0) } else { 0.0 };
    Some(curve.hermite(k, frac).0)
}

/// Maximum base distance between the projections of the sub-Riemannian and the
/// extended-metric geodesics from the same (unit-normalized) initial covector,
/// the Riemannian projection matched to the first by arc length.
pub fn compare_projections(
    model: &dyn Submersion,
    metric: &ExtendedCometric,
    state0: &PhaseState,
    t_end: f64,
    h: f64,
) -> Result<f64> {
    let start = normalize_state(model, state0)?;
    let sr = integrate_normal_geodesic(model, &start, t_end, h)?;
    let sr_curve = base_curve(model, None, &sr)?;
    if !start.unit_normalized {
        // horizontal momentum vanishes: the sub-Riemannian curve is constant
        // and the Riemannian one stays in the fibre
        let riem = integrate_extended_geodesic(model, metric, &start, t_end, h)?;
        let y0 = &sr_curve.points[0];
        return Ok(riem.states.iter().map(|s| (model.project(&s.x) - y0).norm()).fold(0.0, f64::max));
    }
    // integrate past t_end so that slower projections still cover the arc
    let riem = integrate_extended_geodesic(model, metric, &start, t_end * 1.1 + 10.0 * h, h)?;
    let riem_curve = base_curve(model, Some(metric), &riem)?;
    if sr.len() < 2 || riem.len() < 2 {
        return Ok((&sr_curve.points[0] - &riem_curve.points[0]).norm());
    }
    let sr_len = arc_lengths(&sr_curve);
    let riem_len = arc_lengths(&riem_curve);
    let mut worst: f64 = 0.0;
    for (p, s) in sr_curve.points.iter().zip(&sr_len) {
        match at_arc_length(&riem_curve, &riem_len, *s) {
            Some(q) => worst = worst.max((p - q).norm()),
            None => break,
        }
    }
    Ok(worst)
}
