//! Uncertainty-aware dimensionality reduction.
//!
//! Both methods take distributions in n dimensions and return distributions
//! in d < n dimensions together with the affine maps that produced them:
//!
//! * [`uapca`] generalizes principal component analysis by adding the
//!   average input covariance to the covariance of the means, then projects
//!   every distribution with the single shared basis.
//! * [`uamds_fit`] gives each distribution its own affine map and minimizes
//!   a closed-form stress so that low-dimensional distances between the
//!   random variables match high-dimensional ones.

pub mod uamds;
pub mod uapca;

pub use uamds::{uamds_fit, uamds_stress, uamds_stress_gradient, UamdsInit, UamdsParams};
pub use uapca::{uapca, UapcaModel};

use crate::distribution::{AffineMap, Distribution};

/// Output of a dimensionality-reduction run.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingResult {
    /// Projected distributions, in input order, names preserved.
    pub distributions: Vec<Distribution>,
    /// The affine map that produced each projected distribution.
    pub maps: Vec<AffineMap>,
    /// Objective value per accepted optimization step, starting with the
    /// initial value. Empty for methods that do not iterate.
    pub stress_trace: Vec<f64>,
    /// Whether the stopping tolerance was reached before the iteration cap.
    pub converged: bool,
}
