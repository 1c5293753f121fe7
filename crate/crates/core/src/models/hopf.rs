//! The Hopf fibration S³ → S²(½).
//!
//! S³ is the unit quaternions in ambient ℝ⁴ = span{1, i, j, k}. The frame is
//! left-invariant: X₁ = q·j, X₂ = q·k horizontal and V = q·i vertical, the
//! generator of the right U(1)-action. The projection is π(q) = ½ q i q̄ ∈ Im ℍ.
//!
//! Radius ½: dπ(q·j) = −q k q̄ and dπ(q·k) = q j q̄ are unit and orthogonal,
//! while dπ(q·i) = 0, so dπ is an isometry from 𝒟 onto the tangent planes of
//! the sphere of radius |½ q i q̄| = ½.

use rand_distr::{Distribution, StandardNormal};

use crate::base::BaseSpace;
use crate::error::{geometry, Result};
use crate::geometry::{check_finite_len, BracketMode, FrameStructure, Submersion};
use crate::{Matrix, SeededRng, Vector};

pub type Quaternion = [f64; 4];

/// Points of M further than this from the unit sphere are rejected.
pub const SPHERE_TOLERANCE: f64 = 1e-9;

pub fn qmul(a: Quaternion, b: Quaternion) -> Quaternion {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

pub fn conj(a: Quaternion) -> Quaternion {
    [a[0], -a[1], -a[2], -a[3]]
}

/// 1, i, j, k for index 0..4.
pub fn basis_quaternion(i: usize) -> Quaternion {
    let mut q = [0.0; 4];
    q[i] = 1.0;
    q
}

fn as_quat(x: &Vector) -> Quaternion {
    [x[0], x[1], x[2], x[3]]
}

/// Matrix of q ↦ q·u on ℝ⁴.
fn right_mult(u: Quaternion) -> Matrix {
    Matrix::from_fn(4, 4, |r, c| qmul(basis_quaternion(c), u)[r])
}

// frame order: X₁ = q·j, X₂ = q·k, V = q·i
const FRAME_UNITS: [usize; 3] = [2, 3, 1];

#[derive(Clone, Debug)]
pub struct Hopf {
    base: BaseSpace,
    structure: FrameStructure,
    mode: BracketMode,
}

impl Default for Hopf {
    fn default() -> Self {
        Self::new()
    }
}

impl Hopf {
    pub fn new() -> Self {
        // [qu, qw] = q(uw − wu): [X₁, X₂] = 2V, [X₂, V] = 2X₁, [V, X₁] = 2X₂
        let mut structure = FrameStructure::zeros(3);
        structure.set_antisymmetric(2, 0, 1, 2.0);
        structure.set_antisymmetric(0, 1, 2, 2.0);
        structure.set_antisymmetric(1, 2, 0, 2.0);
        Self { base: BaseSpace::Sphere { dim: 2, radius: 0.5 }, structure, mode: BracketMode::Analytic }
    }

    pub fn with_bracket_mode(mut self, mode: BracketMode) -> Self {
        self.mode = mode;
        self
    }
}

impl Submersion for Hopf {
    fn name(&self) -> &str {
        "hopf"
    }

    fn dim(&self) -> usize {
        3
    }

    fn base(&self) -> &BaseSpace {
        &self.base
    }

    fn chart_dim(&self) -> usize {
        4
    }

    fn frame(&self, x: &Vector) -> Matrix {
        let q = as_quat(x);
        Matrix::from_fn(4, 3, |r, c| qmul(q, basis_quaternion(FRAME_UNITS[c]))[r])
    }

    fn frame_jacobians(&self, _x: &Vector) -> Option<Vec<Matrix>> {
        Some(FRAME_UNITS.iter().map(|&u| right_mult(basis_quaternion(u))).collect())
    }

    fn structure(&self) -> Option<&FrameStructure> {
        Some(&self.structure)
    }

    fn bracket_mode(&self) -> BracketMode {
        self.mode
    }

    fn project(&self, x: &Vector) -> Vector {
        let q = as_quat(x);
        let p = qmul(qmul(q, basis_quaternion(1)), conj(q));
        Vector::from_vec(vec![0.5 * p[1], 0.5 * p[2], 0.5 * p[3]])
    }

    fn projection_differential(&self, x: &Vector) -> Matrix {
        // dπ(w) = ½ (w i q̄ + q i w̄)
        let q = as_quat(x);
        let i = basis_quaternion(1);
        Matrix::from_fn(3, 4, |r, c| {
            let w = basis_quaternion(c);
            let a = qmul(qmul(w, i), conj(q));
            let b = qmul(qmul(q, i), conj(w));
            0.5 * (a[r + 1] + b[r + 1])
        })
    }

    fn check_point(&self, x: &Vector) -> Result<()> {
        check_finite_len(x, 4, "point")?;
        let dev = (x.norm() - 1.0).abs();
        if dev > SPHERE_TOLERANCE {
            return Err(geometry(format!("point is off the unit sphere by {dev:e}")));
        }
        Ok(())
    }

    fn sample_point(&self, rng: &mut SeededRng) -> Vector {
        let g = Vector::from_fn(4, |_, _| StandardNormal.sample(rng));
        g.normalize()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{bracket, frame_residual};
    use crate::sampling;

    #[test]
    fn quaternion_units() {
        let [one, i, j, k] = [0, 1, 2, 3].map(basis_quaternion);
        assert_eq!(qmul(i, j), k);
        assert_eq!(qmul(j, i), k.map(|c| -c));
        assert_eq!(qmul(qmul(i, j), k), one.map(|c| -c));
    }

    #[test]
    fn projection_lands_on_radius_half_sphere() {
        let h = Hopf::new();
        let mut rng = sampling::rng(0x5EED);
        for _ in 0..100 {
            let q = h.sample_point(&mut rng);
            assert!((h.project(&q).norm() - 0.5).abs() < 1e-15);
            assert!(frame_residual(&h, &q) < 1e-12);
        }
    }

    #[test]
    fn horizontal_fields_project_isometrically() {
        // differentiate π along q·exp(t j) numerically
        let h = Hopf::new();
        let mut rng = sampling::rng(7);
        for _ in 0..20 {
            let q = h.sample_point(&mut rng);
            let t = 1e-5;
            let curve = |s: f64| {
                let e = [s.cos(), 0.0, s.sin(), 0.0];
                Vector::from_column_slice(&qmul(as_quat(&q), e))
            };
            let d = (h.project(&curve(t)) - h.project(&curve(-t))) / (2.0 * t);
            assert!((d.norm() - 1.0).abs() < 1e-9);
            let vert = h.projection_differential(&q) * h.frame(&q).column(2);
            assert!(vert.norm() < 1e-15);
        }
    }

    #[test]
    fn off_sphere_points_are_rejected() {
        let h = Hopf::new();
        assert!(h.check_point(&Vector::from_vec(vec![1.0 + 1e-6, 0.0, 0.0, 0.0])).is_err());
        assert!(h.check_point(&Vector::from_vec(vec![1.0 + 1e-12, 0.0, 0.0, 0.0])).is_ok());
    }

    #[test]
    fn analytic_and_fd_brackets_agree() {
        let exact = Hopf::new();
        let fd = Hopf::new().with_bracket_mode(BracketMode::FiniteDifference);
        let q = exact.sample_point(&mut sampling::rng(3));
        for a in 0..3 {
            for b in 0..3 {
                let e = bracket(&exact, &q, a, b).unwrap();
                let f = bracket(&fd, &q, a, b).unwrap();
                assert!((e - f).norm() < 1e-9, "[{a},{b}]");
            }
        }
        // [X₁, X₂] = 2V
        assert!((bracket(&exact, &q, 0, 1).unwrap() - exact.frame(&q).column(2) * 2.0).norm() < 1e-15);
    }
}
