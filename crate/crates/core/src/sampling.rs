//! Fixed-seed random probes.

use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use crate::geometry::{base_frame, AnnihilatorCovector, Submersion};
use crate::{SeededRng, Vector};

/// Seed of the model invariant suites.
pub const INVARIANT_SEED: u64 = 0x5EED;

pub fn rng(seed: u64) -> SeededRng {
    SeededRng::seed_from_u64(seed)
}

pub fn points(model: &dyn Submersion, count: usize, seed: u64) -> Vec<Vector> {
    let mut r = rng(seed);
    (0..count).map(|_| model.sample_point(&mut r)).collect()
}

fn gaussian(len: usize, r: &mut SeededRng) -> Vector {
    Vector::from_fn(len, |_, _| StandardNormal.sample(r))
}

/// Uniformly distributed unit tangent vector at π(x), in base chart coordinates.
pub fn unit_base_vector(model: &dyn Submersion, x: &Vector, r: &mut SeededRng) -> Vector {
    let c = gaussian(model.base_dim(), r).normalize();
    base_frame(model, x) * c
}

/// Annihilator with standard Gaussian coefficients.
pub fn annihilator(model: &dyn Submersion, r: &mut SeededRng) -> AnnihilatorCovector {
    AnnihilatorCovector::new(gaussian(model.dim() - model.base_dim(), r))
}

/// A base point (through x ∈ M), a covector α ∈ Ann(𝒟)_x and a unit v ∈ T_{π(x)}N.
#[derive(Clone, Debug, PartialEq)]
pub struct Probe {
    pub x: Vector,
    pub alpha: AnnihilatorCovector,
    pub v: Vector,
}

pub fn probes(model: &dyn Submersion, count: usize, seed: u64) -> Vec<Probe> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let x = model.sample_point(&mut r);
            let alpha = annihilator(model, &mut r);
            let v = unit_base_vector(model, &x, &mut r);
            Probe { x, alpha, v }
        })
        .collect()
}
