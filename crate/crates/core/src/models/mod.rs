//! Built-in submersion models.

pub mod carnot;
pub mod hopf;

use std::sync::Arc;

pub use carnot::{CarnotStep2, StructureConstants};
pub use hopf::Hopf;

use crate::error::{input, Result};
use crate::geometry::Submersion;

/// Heisenberg group ℝ³ → ℝ², X = ∂x − (y/2)∂z, Y = ∂y + (x/2)∂z, V = ∂z.
pub fn heisenberg() -> CarnotStep2 {
    CarnotStep2::new_unchecked("heisenberg", StructureConstants::heisenberg())
}

pub fn step2_carnot(constants: StructureConstants) -> Result<CarnotStep2> {
    CarnotStep2::new("step2-carnot", constants)
}

/// The H-type group built on the quaternions, ℝ⁷ → ℝ⁴.
pub fn quaternionic_htype() -> CarnotStep2 {
    CarnotStep2::new_unchecked("quaternionic-htype", StructureConstants::quaternionic())
}

/// Heisenberg × Heisenberg → ℝ⁴ with the two centres as fibres.
pub fn product_heisenberg() -> CarnotStep2 {
    CarnotStep2::new_unchecked("product-heisenberg", StructureConstants::product_heisenberg())
}

pub fn hopf() -> Hopf {
    Hopf::new()
}

/// Names accepted by [`by_name`].
pub const MODEL_NAMES: [&str; 4] = ["heisenberg", "quaternionic-htype", "product-heisenberg", "hopf"];

pub fn by_name(name: &str) -> Result<Arc<dyn Submersion>> {
    match name {
        "heisenberg" => Ok(Arc::new(heisenberg())),
        "quaternionic-htype" | "htype" => Ok(Arc::new(quaternionic_htype())),
        "product-heisenberg" => Ok(Arc::new(product_heisenberg())),
        "hopf" => Ok(Arc::new(hopf())),
        other => Err(input(format!("unknown model '{other}' (known: {})", MODEL_NAMES.join(", ")))),
    }
}

pub fn built_in() -> Vec<Arc<dyn Submersion>> {
    MODEL_NAMES.iter().map(|n| by_name(n).expect("built-in model")).collect()
}
