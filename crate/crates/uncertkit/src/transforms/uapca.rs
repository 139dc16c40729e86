//! Uncertainty-aware principal component analysis.
//!
//! Classical PCA sees only the spread *between* points. Here each input is
//! a whole distribution, so the decomposed covariance is the sum of two
//! parts: the covariance of the means (between-distribution structure) and
//! the average covariance (within-distribution spread). With all input
//! covariances zero the second part vanishes and the method reduces exactly
//! to PCA on the means, which is the main correctness anchor for tests.

use crate::distribution::{AffineMap, Distribution, MultivariateNormal};
use crate::error::{Error, Result};
use crate::numerics::eigen::sym_eig;
use crate::numerics::matrix::{Mat, SymMatrix};
use crate::transforms::EmbeddingResult;

/// Fitted projection model: the shared center, the projection basis, and
/// the full spectrum of the combined covariance.
#[derive(Debug, Clone)]
pub struct UapcaModel {
    pub center: Vec<f64>,
    /// n×d; columns are the top-d eigenvectors, orthonormal.
    pub basis: Mat,
    /// All n eigenvalues of the combined covariance, descending.
    pub eigenvalues: Vec<f64>,
}

impl UapcaModel {
    /// The projection `x ↦ Wᵀ(x − center)` as an affine map.
    pub fn map(&self) -> AffineMap {
        let wt = self.basis.transpose();
        let offset: Vec<f64> = wt.mul_vec(&self.center).iter().map(|v| -v).collect();
        AffineMap::new(wt, offset).expect("projection shapes agree by construction")
    }
}

/// Project a list of distributions to `d` dimensions, keeping their
/// uncertainty.
///
/// Inputs that are not Gaussian are reduced to their first two moments
/// first; every output is a Gaussian. The combined covariance weights all
/// distributions uniformly.
pub fn uapca(dists: &[Distribution], d: usize) -> Result<(EmbeddingResult, UapcaModel)> {
    if dists.is_empty() {
        return Err(Error::domain("reduction needs at least one distribution".to_string()));
    }
    let n = dists[0].dim();
    for (i, dist) in dists.iter().enumerate() {
        if dist.dim() != n {
            return Err(Error::domain(format!(
                "distribution {i} has dimension {} but the first has {n}",
                dist.dim()
            )));
        }
    }
    if d == 0 || d > n {
        return Err(Error::domain(format!(
            "target dimension must satisfy 1 <= d <= {n}, got {d}"
        )));
    }

    let moments: Vec<(Vec<f64>, SymMatrix)> = dists.iter().map(|x| x.moments()).collect();
    let model = fit_model(&moments, d)?;
    let map = model.map();

    let distributions = dists
        .iter()
        .zip(&moments)
        .map(|(dist, (mean, cov))| {
            let gaussian = Distribution::from_normal(MultivariateNormal::new(
                mean.clone(),
                cov.clone(),
            )?);
            let projected = gaussian.affine_transform(&map)?;
            Ok(match &dist.name {
                Some(name) => projected.with_name(name.clone()),
                None => projected,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let maps = vec![map; dists.len()];
    Ok((
        EmbeddingResult {
            distributions,
            maps,
            stress_trace: Vec::new(),
            converged: true,
        },
        model,
    ))
}

fn fit_model(moments: &[(Vec<f64>, SymMatrix)], d: usize) -> Result<UapcaModel> {
    let n = moments[0].0.len();
    let count = moments.len() as f64;

    let mut center = vec![0.0; n];
    for (mean, _) in moments {
        for j in 0..n {
            center[j] += mean[j];
        }
    }
    for c in center.iter_mut() {
        *c /= count;
    }

    // Combined covariance: covariance of the means plus mean of the
    // covariances, both with uniform 1/N weights.
    let mut combined = Mat::zeros(n, n);
    for (mean, cov) in moments {
        for i in 0..n {
            let di = mean[i] - center[i];
            for j in 0..n {
                let dj = mean[j] - center[j];
                combined.set(i, j, combined.get(i, j) + (di * dj + cov.get(i, j)) / count);
            }
        }
    }

    let eig = sym_eig(&SymMatrix::new(&combined)?)?;
    Ok(UapcaModel {
        center,
        basis: eig.leading_basis(d),
        eigenvalues: eig.eigenvalues,
    })
}
