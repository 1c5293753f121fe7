//! Step-2 Carnot groups in exponential coordinates (x, z) ∈ ℝⁿ × ℝ^{m−n},
//! submersed onto the horizontal layer ℝⁿ.
//!
//! The frame is X_i = ∂_{x_i} − ½ Σ_{j,k} c^k_ij x_j ∂_{z_k}, V_k = ∂_{z_k}, so
//! that [X_i, X_j] = Σ_k c^k_ij V_k and every other bracket vanishes.

use rand::Rng;

use crate::base::BaseSpace;
use crate::error::{Error, Result};
use crate::geometry::{BracketMode, FrameStructure, Submersion};
use crate::{Matrix, SeededRng, Vector};

/// Coefficients c^k_ij of [X_i, X_j] = Σ_k c^k_ij V_k.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    n: usize,
    rank: usize,
    data: Vec<f64>,
}

impl StructureConstants {
    pub fn zeros(n: usize, rank: usize) -> Self {
        Self { n, rank, data: vec![0.0; rank * n * n] }
    }

    /// Builds constants from `(k, i, j, value)` entries (0-based); each entry
    /// also sets c^k_ji = −value.
    pub fn from_entries(n: usize, rank: usize, entries: &[(usize, usize, usize, f64)]) -> Result<Self> {
        let mut c = Self::zeros(n, rank);
        for &(k, i, j, value) in entries {
            if k >= rank || i >= n || j >= n {
                return Err(Error::Construction(format!(
                    "structure constant index ({k}, {i}, {j}) out of range for n = {n}, m − n = {rank}"
                )));
            }
            if i == j && value != 0.0 {
                return Err(Error::Construction(format!("c^{k}_{{{i}{i}}} must vanish")));
            }
            c.set(k, i, j, value);
        }
        Ok(c)
    }

    pub fn base_dim(&self) -> usize {
        self.n
    }

    pub fn vertical_rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.data[(k * self.n + i) * self.n + j]
    }

    pub fn set(&mut self, k: usize, i: usize, j: usize, value: f64) {
        let n = self.n;
        self.data[(k * n + i) * n + j] = value;
        self.data[(k * n + j) * n + i] = -value;
    }

    /// Heisenberg algebra: [X, Y] = Z.
    pub fn heisenberg() -> Self {
        let mut c = Self::zeros(2, 1);
        c.set(0, 0, 1, 1.0);
        c
    }

    /// Two commuting copies of the Heisenberg algebra, ordered X, Y, X̂, Ŷ | Z, Ẑ.
    pub fn product_heisenberg() -> Self {
        let mut c = Self::zeros(4, 2);
        c.set(0, 0, 1, 1.0);
        c.set(1, 2, 3, 1.0);
        c
    }

    /// Quaternionic H-type algebra ℍ ⊕ Im ℍ: c^k_ij = ⟨u_k e_i, e_j⟩ with
    /// e = (1, i, j, k) and u = (i, j, k).
    pub fn quaternionic() -> Self {
        let mut c = Self::zeros(4, 3);
        for k in 0..3 {
            let u = super::hopf::basis_quaternion(k + 1);
            for i in 0..4 {
                let ue = super::hopf::qmul(u, super::hopf::basis_quaternion(i));
                for j in 0..4 {
                    c.data[(k * 4 + i) * 4 + j] = ue[j];
                }
            }
        }
        c
    }

    /// Checks antisymmetry and that the brackets span the vertical layer.
    pub fn validate(&self) -> Result<()> {
        for k in 0..self.rank {
            for i in 0..self.n {
                for j in 0..self.n {
                    if (self.get(k, i, j) + self.get(k, j, i)).abs() > 1e-14 {
                        return Err(Error::Construction(format!(
                            "structure constants are not antisymmetric at (k, i, j) = ({k}, {i}, {j})"
                        )));
                    }
                }
            }
        }
        let deficient = self.deficient_directions();
        if !deficient.is_empty() {
            let dirs: Vec<String> = deficient
                .iter()
                .map(|d| format!("{:?}", d.iter().map(|c| (c * 1e6).round() / 1e6).collect::<Vec<_>>()))
                .collect();
            return Err(Error::Construction(format!(
                "structure constants are not bracket-generating; vertical directions never reached: {}",
                dirs.join(", ")
            )));
        }
        Ok(())
    }

    /// Unit vectors of ℝ^{m−n} orthogonal to every bracket [X_i, X_j].
    pub fn deficient_directions(&self) -> Vec<Vec<f64>> {
        let pairs: Vec<(usize, usize)> = (0..self.n).flat_map(|i| ((i + 1)..self.n).map(move |j| (i, j))).collect();
        if self.rank == 0 {
            return Vec::new();
        }
        let span = Matrix::from_fn(self.rank, pairs.len().max(1), |k, p| {
            pairs.get(p).map(|&(i, j)| self.get(k, i, j)).unwrap_or(0.0)
        });
        // left null space of the span matrix via the eigenvectors of S Sᵀ
        let eig = (&span * span.transpose()).symmetric_eigen();
        let scale = eig.eigenvalues.amax().max(1.0);
        (0..self.rank)
            .filter(|&i| eig.eigenvalues[i] <= 1e-20 * scale)
            .map(|i| eig.eigenvectors.column(i).iter().copied().collect())
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct CarnotStep2 {
    name: String,
    constants: StructureConstants,
    structure: FrameStructure,
    base: BaseSpace,
    jacobians: Vec<Matrix>,
    mode: BracketMode,
}

impl CarnotStep2 {
    /// Builds the model without checking that the constants are
    /// bracket-generating. Used for deliberately degenerate examples.
    pub fn new_unchecked(name: impl Into<String>, constants: StructureConstants) -> Self {
        let n = constants.base_dim();
        let rank = constants.vertical_rank();
        let m = n + rank;
        let mut structure = FrameStructure::zeros(m);
        for k in 0..rank {
            for i in 0..n {
                for j in (i + 1)..n {
                    structure.set_antisymmetric(n + k, i, j, constants.get(k, i, j));
                }
            }
        }
        // ∂(X_i)_{z_k} / ∂x_j = −½ c^k_ij; vertical fields are constant
        let mut jacobians = vec![Matrix::zeros(m, m); m];
        for (i, jac) in jacobians.iter_mut().enumerate().take(n) {
            for k in 0..rank {
                for j in 0..n {
                    jac[(n + k, j)] = -0.5 * constants.get(k, i, j);
                }
            }
        }
        Self {
            name: name.into(),
            constants,
            structure,
            base: BaseSpace::Euclidean { dim: n },
            jacobians,
            mode: BracketMode::Analytic,
        }
    }

    pub fn new(name: impl Into<String>, constants: StructureConstants) -> Result<Self> {
        constants.validate()?;
        Ok(Self::new_unchecked(name, constants))
    }

    pub fn with_bracket_mode(mut self, mode: BracketMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn constants(&self) -> &StructureConstants {
        &self.constants
    }
}

impl Submersion for CarnotStep2 {
    fn name(&self) -> &str {
        &self.name
    }

    fn dim(&self) -> usize {
        self.constants.base_dim() + self.constants.vertical_rank()
    }

    fn base(&self) -> &BaseSpace {
        &self.base
    }

    fn frame(&self, x: &Vector) -> Matrix {
        let n = self.constants.base_dim();
        let m = self.dim();
        let mut f = Matrix::identity(m, m);
        for i in 0..n {
            for k in 0..self.constants.vertical_rank() {
                let mut s = 0.0;
                for j in 0..n {
                    s += self.constants.get(k, i, j) * x[j];
                }
                f[(n + k, i)] = -0.5 * s;
            }
        }
        f
    }

    fn frame_jacobians(&self, _x: &Vector) -> Option<Vec<Matrix>> {
        Some(self.jacobians.clone())
    }

    fn structure(&self) -> Option<&FrameStructure> {
        Some(&self.structure)
    }

    fn bracket_mode(&self) -> BracketMode {
        self.mode
    }

    fn project(&self, x: &Vector) -> Vector {
        x.rows(0, self.constants.base_dim()).into_owned()
    }

    fn projection_differential(&self, _x: &Vector) -> Matrix {
        let n = self.constants.base_dim();
        Matrix::identity(n, self.dim())
    }

    fn sample_point(&self, rng: &mut SeededRng) -> Vector {
        Vector::from_fn(self.dim(), |_, _| rng.random_range(-2.0..2.0))
    }
}
