//! Riemannian base spaces N.
//!
//! Base points and tangent vectors are stored in ambient coordinates: ℝⁿ itself
//! for the flat base, ℝⁿ⁺¹ for a round sphere. The metric is the restriction of
//! the ambient Euclidean product, and the Levi-Civita connection is the
//! tangential projection of the ambient derivative, written as a Christoffel
//! contraction `Γ(u, v)` so that `∇_u V = dV(u) + Γ(u, V)`.

use crate::{Matrix, Vector};

#[derive(Clone, Debug, PartialEq)]
pub enum BaseSpace {
    Euclidean {
        dim: usize,
    },
    /// Round sphere of the given radius centred at the origin of ℝ^{dim+1}.
    Sphere {
        dim: usize,
        radius: f64,
    },
}

impl BaseSpace {
    pub fn dim(&self) -> usize {
        match *self {
            BaseSpace::Euclidean { dim } | BaseSpace::Sphere { dim, .. } => dim,
        }
    }

    /// Number of ambient coordinates used for points and vectors.
    pub fn chart_dim(&self) -> usize {
        match *self {
            BaseSpace::Euclidean { dim } => dim,
            BaseSpace::Sphere { dim, .. } => dim + 1,
        }
    }

    pub fn metric(&self, _y: &Vector) -> Matrix {
        Matrix::identity(self.chart_dim(), self.chart_dim())
    }

    pub fn inner(&self, _y: &Vector, u: &Vector, v: &Vector) -> f64 {
        u.dot(v)
    }

    pub fn norm(&self, y: &Vector, u: &Vector) -> f64 {
        self.inner(y, u, u).sqrt()
    }

    /// Christoffel contraction Γ_y(u, v), symmetric in u and v.
    pub fn christoffel(&self, y: &Vector, u: &Vector, v: &Vector) -> Vector {
        match *self {
            BaseSpace::Euclidean { dim } => Vector::zeros(dim),
            BaseSpace::Sphere { radius, .. } => y * (u.dot(v) / (radius * radius)),
        }
    }

    /// Full array Γ^k_{ij}, returned as one matrix per upper index k.
    pub fn christoffel_symbols(&self, y: &Vector) -> Vec<Matrix> {
        let d = self.chart_dim();
        let mut out = vec![Matrix::zeros(d, d); d];
        for i in 0..d {
            for j in 0..d {
                let g = self.christoffel(y, &unit(d, i), &unit(d, j));
                for (k, gk) in out.iter_mut().enumerate() {
                    gk[(i, j)] = g[k];
                }
            }
        }
        out
    }

    /// Removes the normal component of `v` at `y`.
    pub fn tangent_projection(&self, y: &Vector, v: &Vector) -> Vector {
        match *self {
            BaseSpace::Euclidean { .. } => v.clone(),
            BaseSpace::Sphere { .. } => {
                let yy = y.dot(y);
                v - y * (v.dot(y) / yy)
            }
        }
    }

    /// Sectional curvature of the (constant curvature) base.
    pub fn sectional_curvature(&self) -> f64 {
        match *self {
            BaseSpace::Euclidean { .. } => 0.0,
            BaseSpace::Sphere { radius, .. } => 1.0 / (radius * radius),
        }
    }
}

pub(crate) fn unit(dim: usize, i: usize) -> Vector {
    let mut e = Vector::zeros(dim);
    e[i] = 1.0;
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_christoffels_keep_great_circle_acceleration_normal() {
        let s = BaseSpace::Sphere { dim: 2, radius: 0.5 };
        let y = Vector::from_vec(vec![0.5, 0.0, 0.0]);
        let v = Vector::from_vec(vec![0.0, 1.0, 0.0]);
        // a unit-speed great circle on S²(½) accelerates by -|v|² y / r²
        let acc = -s.christoffel(&y, &v, &v);
        assert!((acc - Vector::from_vec(vec![-2.0, 0.0, 0.0])).norm() < 1e-15);
        let gamma = s.christoffel_symbols(&y);
        assert_eq!(gamma.len(), 3);
        assert!((gamma[0][(1, 1)] - 2.0).abs() < 1e-15);
        assert_eq!(gamma[0][(0, 1)], 0.0);
    }

    #[test]
    fn euclidean_christoffels_vanish() {
        let e = BaseSpace::Euclidean { dim: 3 };
        let y = Vector::from_vec(vec![1.0, 2.0, 3.0]);
        assert!(e.christoffel_symbols(&y).iter().all(|g| g.norm() == 0.0));
    }
}
