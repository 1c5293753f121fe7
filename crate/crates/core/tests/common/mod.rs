#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use subriem::base::BaseSpace;
use subriem::geometry::{BracketMode, Submersion};
use subriem::models::{self, CarnotStep2, StructureConstants};
use subriem::{Matrix, SeededRng, Vector};

/// ℝ³ → ℝ² with X₁ = ∂x, X₂ = ∂y + g(x)∂z, V = ∂z and g' = 1 + s·x, so that
/// R(X₁, X₂) = (1 + s·x) V is not parallel. Brackets come from finite
/// differences.
#[derive(Debug)]
pub struct Warped {
    pub s: f64,
    base: BaseSpace,
}

impl Warped {
    pub fn new(s: f64) -> Self {
        Self { s, base: BaseSpace::Euclidean { dim: 2 } }
    }

    pub fn g(&self, x: f64) -> f64 {
        x + 0.5 * self.s * x * x
    }

    pub fn dg(&self, x: f64) -> f64 {
        1.0 + self.s * x
    }
}

impl Submersion for Warped {
    fn name(&self) -> &str {
        "warped"
    }

    fn dim(&self) -> usize {
        3
    }

    fn base(&self) -> &BaseSpace {
        &self.base
    }

    fn frame(&self, x: &Vector) -> Matrix {
        let mut f = Matrix::identity(3, 3);
        f[(2, 1)] = self.g(x[0]);
        f
    }

    fn bracket_mode(&self) -> BracketMode {
        BracketMode::FiniteDifference
    }

    fn project(&self, x: &Vector) -> Vector {
        x.rows(0, 2).into_owned()
    }

    fn projection_differential(&self, _x: &Vector) -> Matrix {
        Matrix::identity(2, 3)
    }

    fn sample_point(&self, rng: &mut SeededRng) -> Vector {
        Vector::from_fn(3, |_, _| rng.random_range(-1.0..1.0))
    }
}

pub const WARP: f64 = 0.3;

/// Built-in models, their finite-difference variants and the warped model.
pub fn all_models() -> Vec<Arc<dyn Submersion>> {
    let mut out = models::built_in();
    out.push(Arc::new(models::heisenberg().with_bracket_mode(BracketMode::FiniteDifference)));
    out.push(Arc::new(models::quaternionic_htype().with_bracket_mode(BracketMode::FiniteDifference)));
    out.push(Arc::new(models::hopf().with_bracket_mode(BracketMode::FiniteDifference)));
    out.push(Arc::new(Warped::new(WARP)));
    out
}

/// Models whose J operators satisfy J_α² = −|α|² Id.
pub fn htype_models() -> Vec<Arc<dyn Submersion>> {
    vec![Arc::new(models::heisenberg()), Arc::new(models::quaternionic_htype()), Arc::new(models::hopf())]
}

pub fn flat_models() -> Vec<Arc<dyn Submersion>> {
    all_models().into_iter().filter(|m| matches!(m.base(), BaseSpace::Euclidean { .. })).collect()
}

pub fn zero_constants() -> CarnotStep2 {
    CarnotStep2::new_unchecked("zero", StructureConstants::zeros(2, 1))
}

pub fn vec(xs: &[f64]) -> Vector {
    Vector::from_column_slice(xs)
}
