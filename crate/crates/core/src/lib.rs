//! Normal sub-Riemannian geodesics on submersions π: M → N and the geodesic
//! curvatures of their projections.
//!
//! Conventions used throughout:
//! - a frame is a chart_dim × m matrix, horizontal fields X₁..Xₙ first, then
//!   the vertical fields V₁..V_{m−n};
//! - covectors are chart column vectors paired with vectors by the dot product;
//! - r^k_ij = θ_k([X_i, X_j]) are the curvature coefficients of 𝒟, and the J
//!   operator satisfies ⟨J_α e_i, e_j⟩ = α R(X_i, X_j) with e_i = dπ(X_i).

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod base;
pub mod criteria;
pub mod error;
pub mod extension;
pub mod flows;
pub mod frenet;
pub mod geometry;
pub mod models;
pub mod report;
pub mod sampling;

pub use error::{Error, Result};

pub type Vector = nalgebra::DVector<f64>;
pub type Matrix = nalgebra::DMatrix<f64>;
pub type SeededRng = rand_chacha::ChaCha8Rng;
