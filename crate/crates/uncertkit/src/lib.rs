//! Distributions as first-class data: model multivariate uncertainty,
//! project it to low dimension without discarding the covariances, and
//! render the result as deterministic SVG.
//!
//! The crate is organized as a pipeline:
//!
//! - [`distribution`]: Gaussians, Gaussian mixtures, and empirical sample
//!   sets behind one interface (moments, density, seeded sampling, affine
//!   push-forward, marginals).
//! - [`estimation`]: fit Gaussians and kernel density estimates to samples.
//! - [`transforms`]: uncertainty-aware dimensionality reduction that maps
//!   whole distributions, not point estimates, into the plane.
//! - [`viz`]: deterministic SVG plots of uncertain data (scatter with
//!   quantile isolines and isobands, box/violin/strip/swarm panels, plot
//!   matrices).
//! - [`datasets`]: synthetic generators and grouped CSV loading.
//! - [`io`]: versioned JSON persistence with exact round-trips.
//! - [`numerics`]: the deterministic linear-algebra core everything else
//!   stands on.
//!
//! Every sampling API takes an explicit seed and every rendering path is
//! byte-stable: the same inputs produce the same bytes, on any platform.

pub mod distribution;
pub mod error;
pub mod estimation;
pub mod io;
pub mod cli;
pub mod datasets;
pub mod numerics;
pub mod transforms;
pub mod viz;

pub use error::{Error, Result};
