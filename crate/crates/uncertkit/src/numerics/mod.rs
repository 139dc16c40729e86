//! Deterministic numeric primitives: dense matrices, symmetric
//! eigendecomposition, PSD Cholesky, normal-distribution scalars, seeded
//! random numbers, and contour extraction.

pub mod cholesky;
pub mod eigen;
pub mod marching;
pub mod matrix;
pub mod rng;
pub mod special;

pub use cholesky::{
    cholesky_pd, cholesky_pd_jittered, cholesky_psd, solve_lower, solve_lower_transpose,
    CholeskyFactor,
};
pub use eigen::{nearest_psd, sym_eig, EigenDecomposition};
pub use marching::{marching_squares, Polyline};
pub use matrix::{add_vec, dot, norm2, outer, sub_vec, Mat, SymMatrix};
pub use rng::Rng;
pub use special::{erfc, mahalanobis_radius, normal_cdf, normal_pdf, normal_quantile};
