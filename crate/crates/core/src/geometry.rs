//! Pointwise geometry of a submersion π: M → N carrying a horizontal
//! distribution 𝒟 with the metric pulled back from N.
//!
//! # Conventions
//!
//! * A model works in a single chart of M (or ambient coordinates when M is
//!   embedded). Vectors are columns in that chart, covectors are rows stored as
//!   column vectors and paired by the dot product.
//! * `frame(x)` returns the moving frame with the n horizontal fields
//!   X₁..Xₙ first and the m−n vertical fields V₁..V_{m−n} after them.
//! * The dual coframe Θ satisfies Θ_a(E_b) = δ_ab; its vertical members θ_k
//!   annihilate 𝒟 and are the basis for [`AnnihilatorCovector`].
//! * The curvature of 𝒟 is R(v, w) = pr_𝒱 [pr_𝒟 v, pr_𝒟 w]. Its coefficients
//!   r^k_ij = θ_k([X_i, X_j]) are collected in a [`CurvatureForm`].
//! * The J operator is fixed by ⟨J_α e_i, e_j⟩ = α R(X_i, X_j) where
//!   e_i = dπ(X_i) is the orthonormal base frame. Every check in the crate
//!   uses this one sign.

use std::fmt;

use nalgebra::linalg::SVD;

use crate::base::BaseSpace;
use crate::error::{geometry, input, Error, Result};
use crate::report::{CheckReport, Witness};
use crate::{Matrix, SeededRng, Vector};

/// Central-difference step used when frame derivatives are not analytic.
pub const FD_STEP: f64 = 1e-5;

/// Tolerance on the frame invariants of a model.
pub const FRAME_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketMode {
    /// Brackets from supplied structure functions / analytic frame Jacobians.
    Analytic,
    /// Brackets from central differences of the frame.
    FiniteDifference,
}

/// Constant structure functions of a frame: [E_a, E_b] = Σ_c C^c_ab E_c.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameStructure {
    dim: usize,
    data: Vec<f64>,
}

impl FrameStructure {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![0.0; dim * dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, c: usize, a: usize, b: usize) -> f64 {
        self.data[(c * self.dim + a) * self.dim + b]
    }

    /// Sets C^c_ab and C^c_ba = −C^c_ab.
    pub fn set_antisymmetric(&mut self, c: usize, a: usize, b: usize, value: f64) {
        let d = self.dim;
        self.data[(c * d + a) * d + b] = value;
        self.data[(c * d + b) * d + a] = -value;
    }
}

/// An analytic description of π: M → N with its horizontal and vertical frames.
pub trait Submersion: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    /// Dimension m of M.
    fn dim(&self) -> usize;

    fn base(&self) -> &BaseSpace;

    /// Dimension n of N.
    fn base_dim(&self) -> usize {
        self.base().dim()
    }

    /// Number of chart coordinates for points of M (≥ m for embedded models).
    fn chart_dim(&self) -> usize {
        self.dim()
    }

    /// chart_dim × m matrix whose columns are X₁..Xₙ, V₁..V_{m−n} at `x`.
    fn frame(&self, x: &Vector) -> Matrix;

    /// Analytic Jacobians ∂E_a/∂x of every frame field, if known.
    fn frame_jacobians(&self, _x: &Vector) -> Option<Vec<Matrix>> {
        None
    }

    /// Structure functions when the frame has constant brackets.
    fn structure(&self) -> Option<&FrameStructure> {
        None
    }

    fn bracket_mode(&self) -> BracketMode;

    /// π(x) in base chart coordinates.
    fn project(&self, x: &Vector) -> Vector;

    /// dπ at x as a base_chart_dim × chart_dim matrix.
    fn projection_differential(&self, x: &Vector) -> Matrix;

    /// Rejects points outside the model's working chart.
    fn check_point(&self, x: &Vector) -> Result<()> {
        check_finite_len(x, self.chart_dim(), "point")
    }

    /// Draws a point of M for invariant and property suites.
    fn sample_point(&self, rng: &mut SeededRng) -> Vector;
}

pub(crate) fn check_finite_len(v: &Vector, len: usize, what: &str) -> Result<()> {
    if v.len() != len {
        return Err(input(format!("{what} has {} entries, expected {len}", v.len())));
    }
    if v.iter().any(|c| !c.is_finite()) {
        return Err(input(format!("{what} has non-finite entries")));
    }
    Ok(())
}

/// A point of M together with a covector at it.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseState {
    pub x: Vector,
    pub lambda: Vector,
    /// Set when λ has been rescaled so that |♯λ|_g = 1.
    pub unit_normalized: bool,
}

impl PhaseState {
    pub fn new(x: Vector, lambda: Vector) -> Self {
        Self { x, lambda, unit_normalized: false }
    }

    pub fn validate(&self, model: &dyn Submersion) -> Result<()> {
        model.check_point(&self.x)?;
        check_finite_len(&self.lambda, model.chart_dim(), "covector")
    }
}

/// A covector annihilating 𝒟, stored by its coefficients b_k in the vertical
/// coframe θ₁..θ_{m−n}.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnihilatorCovector {
    pub coeffs: Vector,
}

impl AnnihilatorCovector {
    pub fn new(coeffs: Vector) -> Self {
        Self { coeffs }
    }

    pub fn zeros(rank: usize) -> Self {
        Self { coeffs: Vector::zeros(rank) }
    }

    /// The annihilator part pr_𝒱^* λ of an arbitrary chart covector.
    pub fn vertical_part(model: &dyn Submersion, x: &Vector, lambda: &Vector) -> Self {
        let n = model.base_dim();
        let frame = model.frame(x);
        let coeffs = Vector::from_iterator(model.dim() - n, (n..model.dim()).map(|k| lambda.dot(&frame.column(k))));
        Self { coeffs }
    }

    /// Accepts a chart covector only if it vanishes on 𝒟 at `x`.
    pub fn from_chart(model: &dyn Submersion, x: &Vector, lambda: &Vector) -> Result<Self> {
        check_finite_len(lambda, model.chart_dim(), "covector")?;
        let frame = model.frame(x);
        let scale = lambda.norm().max(1.0);
        for i in 0..model.base_dim() {
            let pairing = lambda.dot(&frame.column(i));
            if pairing.abs() > 1e-12 * scale {
                return Err(input(format!(
                    "covector does not annihilate the horizontal distribution: λ(X_{}) = {pairing:e}",
                    i + 1
                )));
            }
        }
        Ok(Self::vertical_part(model, x, lambda))
    }

    /// Expands β = Σ b_k θ_k in chart coordinates.
    pub fn to_chart(&self, model: &dyn Submersion, x: &Vector) -> Result<Vector> {
        let theta = coframe(model, x)?;
        let n = model.base_dim();
        let mut out = Vector::zeros(model.chart_dim());
        for (k, b) in self.coeffs.iter().enumerate() {
            out += theta.column(n + k) * *b;
        }
        Ok(out)
    }
}

/// Jacobians of every frame field at `x`, analytic when the model supplies
/// them and the bracket mode allows it, central differences otherwise.
pub fn frame_jacobians(model: &dyn Submersion, x: &Vector) -> Result<Vec<Matrix>> {
    if model.bracket_mode() == BracketMode::Analytic {
        if let Some(jac) = model.frame_jacobians(x) {
            return Ok(jac);
        }
    }
    fd_frame_jacobians(model, x)
}

fn fd_frame_jacobians(model: &dyn Submersion, x: &Vector) -> Result<Vec<Matrix>> {
    let c = model.chart_dim();
    let m = model.dim();
    let mut jac = vec![Matrix::zeros(c, c); m];
    for j in 0..c {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[j] += FD_STEP;
        xm[j] -= FD_STEP;
        let h = xp[j] - xm[j];
        if h == 0.0 || !h.is_finite() {
            return Err(Error::Numerical(format!(
                "finite-difference step underflows at coordinate {j} (x = {:e})",
                x[j]
            )));
        }
        let diff = (model.frame(&xp) - model.frame(&xm)) / h;
        for (a, ja) in jac.iter_mut().enumerate() {
            ja.set_column(j, &diff.column(a));
        }
    }
    Ok(jac)
}

/// Lie bracket [E_a, E_b](x) of two frame fields.
pub fn bracket(model: &dyn Submersion, x: &Vector, a: usize, b: usize) -> Result<Vector> {
    let m = model.dim();
    if a >= m || b >= m {
        return Err(input(format!("frame index out of range: ({a}, {b}) with m = {m}")));
    }
    let frame = model.frame(x);
    if model.bracket_mode() == BracketMode::Analytic {
        if let Some(c) = model.structure() {
            let mut out = Vector::zeros(model.chart_dim());
            for k in 0..m {
                let coef = c.get(k, a, b);
                if coef != 0.0 {
                    out += frame.column(k) * coef;
                }
            }
            return Ok(out);
        }
    }
    let jac = frame_jacobians(model, x)?;
    Ok(&jac[b] * frame.column(a) - &jac[a] * frame.column(b))
}

/// Dual coframe Θ at x: chart_dim × m with Θ_aᵀ E_b = δ_ab.
pub fn coframe(model: &dyn Submersion, x: &Vector) -> Result<Matrix> {
    dual_of(&model.frame(x))
}

pub(crate) fn dual_of(frame: &Matrix) -> Result<Matrix> {
    let gram = frame.transpose() * frame;
    let chol = gram.cholesky().ok_or_else(|| geometry("frame fields are linearly dependent"))?;
    Ok(frame * chol.inverse())
}

/// Coefficients r^k_ij = θ_k([X_i, X_j]) of the curvature of 𝒟.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureForm {
    n: usize,
    rank: usize,
    data: Vec<f64>,
}

impl CurvatureForm {
    pub fn zeros(n: usize, rank: usize) -> Self {
        Self { n, rank, data: vec![0.0; n * n * rank] }
    }

    pub fn base_dim(&self) -> usize {
        self.n
    }

    /// Rank m−n of the vertical bundle.
    pub fn vertical_rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.data[(k * self.n + i) * self.n + j]
    }

    fn set(&mut self, k: usize, i: usize, j: usize, v: f64) {
        self.data[(k * self.n + i) * self.n + j] = v;
    }

    /// n×n matrix of the k-th component.
    pub fn component(&self, k: usize) -> Matrix {
        Matrix::from_fn(self.n, self.n, |i, j| self.get(k, i, j))
    }

    /// P_ij = β R(X_i, X_j) for β = Σ b_k θ_k.
    pub fn pair(&self, beta: &AnnihilatorCovector) -> Matrix {
        Matrix::from_fn(self.n, self.n, |i, j| (0..self.rank).map(|k| beta.coeffs[k] * self.get(k, i, j)).sum())
    }

    /// Vertical coefficients of R(a, b) for horizontal coefficient vectors a, b.
    pub fn apply(&self, a: &Vector, b: &Vector) -> Vector {
        Vector::from_fn(self.rank, |k, _| {
            // pairing over i < j keeps R(a, b) = −R(b, a) exact in floating point
            let mut s = 0.0;
            for i in 0..self.n {
                for j in (i + 1)..self.n {
                    s += self.get(k, i, j) * (a[i] * b[j] - a[j] * b[i]);
                }
            }
            s
        })
    }
}

/// Curvature coefficients of 𝒟 at x.
pub fn curvature_form(model: &dyn Submersion, x: &Vector) -> Result<CurvatureForm> {
    let n = model.base_dim();
    let m = model.dim();
    let mut form = CurvatureForm::zeros(n, m - n);
    if model.bracket_mode() == BracketMode::Analytic {
        if let Some(c) = model.structure() {
            for k in 0..m - n {
                for i in 0..n {
                    for j in 0..n {
                        form.set(k, i, j, c.get(n + k, i, j));
                    }
                }
            }
            return Ok(form);
        }
    }
    let theta = coframe(model, x)?;
    for i in 0..n {
        for j in (i + 1)..n {
            let br = bracket(model, x, i, j)?;
            for k in 0..m - n {
                let v = theta.column(n + k).dot(&br);
                form.set(k, i, j, v);
                form.set(k, j, i, -v);
            }
        }
    }
    Ok(form)
}

/// Coefficients of the horizontal part of a chart vector in X₁..Xₙ.
pub fn horizontal_coords(model: &dyn Submersion, x: &Vector, v: &Vector) -> Result<Vector> {
    let theta = coframe(model, x)?;
    let n = model.base_dim();
    Ok(theta.columns(0, n).transpose() * v)
}

/// Coefficients of the vertical part of a chart vector in V₁..V_{m−n}.
pub fn vertical_coords(model: &dyn Submersion, x: &Vector, v: &Vector) -> Result<Vector> {
    let theta = coframe(model, x)?;
    let n = model.base_dim();
    Ok(theta.columns(n, model.dim() - n).transpose() * v)
}

/// R(v, w) = pr_𝒱 [pr_𝒟 v, pr_𝒟 w] as a chart vector.
pub fn curvature_r(model: &dyn Submersion, x: &Vector, v: &Vector, w: &Vector) -> Result<Vector> {
    model.check_point(x)?;
    check_finite_len(v, model.chart_dim(), "vector")?;
    check_finite_len(w, model.chart_dim(), "vector")?;
    let a = horizontal_coords(model, x, v)?;
    let b = horizontal_coords(model, x, w)?;
    let coeffs = curvature_form(model, x)?.apply(&a, &b);
    Ok(vertical_vector(model, x, &coeffs))
}

/// Σ c_k V_k(x).
pub fn vertical_vector(model: &dyn Submersion, x: &Vector, coeffs: &Vector) -> Vector {
    let n = model.base_dim();
    model.frame(x).columns(n, model.dim() - n) * coeffs
}

/// Σ c_i X_i(x).
pub fn horizontal_vector(model: &dyn Submersion, x: &Vector, coeffs: &Vector) -> Vector {
    model.frame(x).columns(0, model.base_dim()) * coeffs
}

/// ♯λ = Σ_i λ(X_i) X_i.
pub fn sharp(model: &dyn Submersion, x: &Vector, lambda: &Vector) -> Result<Vector> {
    model.check_point(x)?;
    check_finite_len(lambda, model.chart_dim(), "covector")?;
    let h = model.frame(x).columns(0, model.base_dim()).into_owned();
    Ok(&h * (h.transpose() * lambda))
}

/// H(x, λ) = ½ Σ_i λ(X_i)².
pub fn hamiltonian_energy(model: &dyn Submersion, state: &PhaseState) -> Result<f64> {
    state.validate(model)?;
    Ok(energy_unchecked(model, &state.x, &state.lambda))
}

pub(crate) fn energy_unchecked(model: &dyn Submersion, x: &Vector, lambda: &Vector) -> f64 {
    let h = model.frame(x);
    0.5 * (0..model.base_dim()).map(|i| lambda.dot(&h.column(i)).powi(2)).sum::<f64>()
}

/// Orthonormal base frame e_i = dπ(X_i) at π(x), as columns.
pub fn base_frame(model: &dyn Submersion, x: &Vector) -> Matrix {
    model.projection_differential(x) * model.frame(x).columns(0, model.base_dim())
}

/// Coordinates of a base tangent vector in the frame e_i = dπ(X_i(x)).
pub fn base_coords(model: &dyn Submersion, x: &Vector, v: &Vector) -> Vector {
    base_frame(model, x).transpose() * model.base().metric(&model.project(x)) * v
}

/// Horizontal lift h_x v of a base tangent vector.
pub fn lift_base_vector(model: &dyn Submersion, x: &Vector, v: &Vector) -> Vector {
    horizontal_vector(model, x, &base_coords(model, x, v))
}

/// The covector λ at x with pr_𝒱^*λ = α and ♯λ = h_x v.
pub fn initial_covector(model: &dyn Submersion, x: &Vector, alpha: &AnnihilatorCovector, v: &Vector) -> Result<Vector> {
    let theta = coframe(model, x)?;
    let n = model.base_dim();
    let c = base_coords(model, x, v);
    Ok(theta.columns(0, n) * c + theta.columns(n, model.dim() - n) * &alpha.coeffs)
}

/// The operator J_α on T_{π(x)}N, in the orthonormal frame e_i = dπ(X_i).
#[derive(Clone, Debug, PartialEq)]
pub struct JOperator {
    op: Matrix,
}

impl JOperator {
    pub fn from_curvature(form: &CurvatureForm, alpha: &AnnihilatorCovector) -> Self {
        Self { op: form.pair(alpha).transpose() }
    }

    /// Matrix acting on frame coordinates: (J v)_j = Σ_i op_ji v_i.
    pub fn matrix(&self) -> &Matrix {
        &self.op
    }

    /// Entries ⟨J e_i, e_j⟩ = α R(X_i, X_j).
    pub fn pairing_matrix(&self) -> Matrix {
        self.op.transpose()
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        &self.op * v
    }

    pub fn square(&self) -> Matrix {
        &self.op * &self.op
    }
}

pub fn j_operator(model: &dyn Submersion, x: &Vector, alpha: &AnnihilatorCovector) -> Result<JOperator> {
    model.check_point(x)?;
    let rank = model.dim() - model.base_dim();
    check_finite_len(&alpha.coeffs, rank, "annihilator coefficients")?;
    Ok(JOperator::from_curvature(&curvature_form(model, x)?, alpha))
}

/// Residual of the frame invariants at one point: orthonormality of dπ(X_i),
/// dπ(V_k) = 0, and linear independence of the whole frame.
pub fn frame_residual(model: &dyn Submersion, x: &Vector) -> f64 {
    let n = model.base_dim();
    let frame = model.frame(x);
    let dpi = model.projection_differential(x);
    let e = &dpi * frame.columns(0, n);
    let gram = e.transpose() * model.base().metric(&model.project(x)) * &e;
    let ortho = (gram - Matrix::identity(n, n)).amax();
    let vertical = (&dpi * frame.columns(n, model.dim() - n)).amax();
    let sv = SVD::new(frame, false, false).singular_values;
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let independence = if smin > 1e-8 { 0.0 } else { 1.0 };
    ortho.max(vertical).max(independence)
}

/// Frame invariant suite over the given points.
pub fn model_invariants(model: &dyn Submersion, points: &[Vector]) -> CheckReport {
    CheckReport::from_witnesses(
        "model-invariants",
        FRAME_TOLERANCE,
        points.iter().map(|x| Witness::at_point(x, frame_residual(model, x))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    #[test]
    fn sharp_at_heisenberg_origin_drops_vertical_part() {
        let h = models::heisenberg();
        let s = sharp(&h, &v(&[0.0, 0.0, 0.0]), &v(&[1.0, 0.0, 5.0])).unwrap();
        assert_eq!(s, v(&[1.0, 0.0, 0.0]));
        let zero = sharp(&h, &v(&[0.3, -1.0, 2.0]), &v(&[0.0, 0.0, 0.0])).unwrap();
        assert_eq!(zero.norm(), 0.0);
    }

    #[test]
    fn sharp_of_annihilator_vanishes() {
        let h = models::heisenberg();
        let x = v(&[0.7, -1.3, 0.2]);
        let beta = AnnihilatorCovector::new(v(&[2.5])).to_chart(&h, &x).unwrap();
        assert!(sharp(&h, &x, &beta).unwrap().norm() < 1e-14);
        let st = PhaseState::new(x, beta);
        assert!(hamiltonian_energy(&h, &st).unwrap().abs() < 1e-28);
    }

    #[test]
    fn energy_examples() {
        let h = models::heisenberg();
        for c in [-3.0, 0.0, 7.0] {
            let st = PhaseState::new(v(&[0.0, 0.0, 0.0]), v(&[1.0, 0.0, c]));
            assert_eq!(hamiltonian_energy(&h, &st).unwrap(), 0.5);
        }
        let st = PhaseState::new(v(&[0.0, 0.0, 0.0]), v(&[3.0, 4.0, 0.0]));
        assert_eq!(hamiltonian_energy(&h, &st).unwrap(), 12.5);
    }

    #[test]
    fn non_finite_input_is_rejected() {
        let h = models::heisenberg();
        let err = sharp(&h, &v(&[0.0, f64::NAN, 0.0]), &v(&[1.0, 0.0, 0.0])).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
        let err = sharp(&h, &v(&[0.0, 0.0, 0.0]), &v(&[1.0, f64::INFINITY, 0.0])).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn heisenberg_brackets() {
        for mode in [BracketMode::Analytic, BracketMode::FiniteDifference] {
            let h = models::heisenberg().with_bracket_mode(mode);
            let x = v(&[0.4, -2.0, 1.1]);
            let xy = bracket(&h, &x, 0, 1).unwrap();
            assert!((xy - v(&[0.0, 0.0, 1.0])).norm() < 1e-9);
            assert!(bracket(&h, &x, 0, 0).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn product_heisenberg_blocks_commute() {
        let p = models::product_heisenberg();
        let x = v(&[0.1, 0.2, 0.3, 0.4, 0.5, 0.6]);
        assert_eq!(bracket(&p, &x, 0, 2).unwrap().norm(), 0.0);
        // [Z, Ẑ] = 0
        assert_eq!(bracket(&p, &x, 4, 5).unwrap().norm(), 0.0);
        let fd = models::product_heisenberg().with_bracket_mode(BracketMode::FiniteDifference);
        assert!(bracket(&fd, &x, 0, 2).unwrap().norm() < 1e-10);
        assert!(bracket(&fd, &x, 4, 5).unwrap().norm() < 1e-10);
    }

    #[test]
    fn bracket_index_out_of_range() {
        let h = models::heisenberg();
        assert!(matches!(bracket(&h, &v(&[0.0; 3]), 0, 3), Err(Error::Input(_))));
    }

    #[test]
    fn fd_step_underflow_is_reported() {
        let h = models::heisenberg().with_bracket_mode(BracketMode::FiniteDifference);
        let err = bracket(&h, &v(&[1e300, 0.0, 0.0]), 0, 1).unwrap_err();
        assert!(matches!(err, Error::Numerical(_)));
    }

    #[test]
    fn curvature_examples() {
        let h = models::heisenberg();
        let o = v(&[0.0, 0.0, 0.0]);
        let r = curvature_r(&h, &o, &v(&[1.0, 0.0, 0.0]), &v(&[0.0, 1.0, 0.0])).unwrap();
        assert_eq!(r, v(&[0.0, 0.0, 1.0]));
        let w = v(&[0.3, 0.8, -1.0]);
        assert_eq!(curvature_r(&h, &o, &w, &w).unwrap().norm(), 0.0);
        let vert = v(&[0.0, 0.0, 1.0]);
        assert_eq!(curvature_r(&h, &o, &vert, &w).unwrap().norm(), 0.0);
    }

    #[test]
    fn j_operator_examples() {
        let h = models::heisenberg();
        let x = v(&[0.5, 0.5, 0.5]);
        let c = 1.7;
        let j = j_operator(&h, &x, &AnnihilatorCovector::new(v(&[c]))).unwrap();
        assert_eq!(j.pairing_matrix(), Matrix::from_row_slice(2, 2, &[0.0, c, -c, 0.0]));
        let j0 = j_operator(&h, &x, &AnnihilatorCovector::zeros(1)).unwrap();
        assert_eq!(j0.matrix().norm(), 0.0);

        let p = models::product_heisenberg();
        let z = AnnihilatorCovector::new(v(&[1.0, 0.0]));
        let jp = j_operator(&p, &v(&[0.0; 6]), &z).unwrap();
        let norms: Vec<f64> = (0..4).map(|i| jp.apply(&crate::base::unit(4, i)).norm()).collect();
        assert_eq!(norms, vec![1.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn annihilator_membership_is_enforced() {
        let h = models::heisenberg();
        let x = v(&[1.0, 2.0, 0.0]);
        // dz is not in Ann(D) away from the origin; θ = dz + (y/2)dx − (x/2)dy is
        assert!(AnnihilatorCovector::from_chart(&h, &x, &v(&[0.0, 0.0, 1.0])).is_err());
        let theta = AnnihilatorCovector::from_chart(&h, &x, &v(&[1.0, -0.5, 1.0])).unwrap();
        assert!((theta.coeffs[0] - 1.0).abs() < 1e-15);
    }
}
