//! The distribution value at the center of the pipeline.
//!
//! Three representations of multivariate uncertainty share one interface:
//! parametric Gaussians, Gaussian mixtures, and raw sample sets. Everything
//! downstream (reduction, plotting, persistence) consumes the shared
//! operations and never branches on the variant, so a fitted KDE and a
//! hand-specified Gaussian flow through the same code paths.

use crate::error::{Error, Result};
use crate::numerics::cholesky::{cholesky_pd_jittered, cholesky_psd, solve_lower};
use crate::numerics::eigen::{nearest_psd, sym_eig};
use crate::numerics::matrix::{add_vec, sub_vec, Mat, SymMatrix};
use crate::numerics::rng::Rng;

/// Gaussian with arbitrary PSD covariance, including rank-deficient ones.
///
/// The constructor repairs covariances that are indefinite at rounding
/// level (clipping negative eigenvalues) and rejects anything worse, so a
/// value of this type always carries a usable covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct MultivariateNormal {
    mean: Vec<f64>,
    cov: SymMatrix,
}

impl MultivariateNormal {
    /// Accepts covariances PSD within `1e-10·max(1, ‖cov‖_F)`; slightly
    /// indefinite input is projected back onto the PSD cone (logged).
    pub fn new(mean: Vec<f64>, cov: SymMatrix) -> Result<Self> {
        if mean.len() != cov.dim() {
            return Err(Error::domain(format!(
                "mean has dimension {} but covariance is {}x{}",
                mean.len(),
                cov.dim(),
                cov.dim()
            )));
        }
        if mean.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("mean vector contains non-finite entries".to_string()));
        }
        let eig = sym_eig(&cov)?;
        let lambda_min = *eig.eigenvalues.last().expect("dimension at least 1");
        let scale = cov.frob_norm().max(1.0);
        if lambda_min < -1e-10 * scale {
            return Err(Error::domain(format!(
                "covariance is not positive semidefinite: smallest eigenvalue {lambda_min:.6e}"
            )));
        }
        // Rounding-level negatives (within 1e-14·scale) are kept untouched:
        // the factorizations downstream absorb them, and leaving the matrix
        // alone keeps this constructor idempotent, so a saved-and-reloaded
        // covariance re-validates to the identical bits. Repair output lands
        // within reconstruction rounding of the PSD cone, below that same
        // threshold, so a repaired matrix never re-triggers repair either.
        let cov = if lambda_min < -1e-14 * scale {
            log::warn!("covariance repaired: eigenvalue {lambda_min:.3e} clipped to zero");
            nearest_psd(&cov)
        } else {
            cov
        };
        Ok(Self { mean, cov })
    }

    /// Standard normal in `n` dimensions.
    pub fn standard(n: usize) -> Self {
        Self {
            mean: vec![0.0; n],
            cov: SymMatrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn cov(&self) -> &SymMatrix {
        &self.cov
    }
}

/// Convex combination of Gaussians; the output type of KDE fitting.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMixture {
    weights: Vec<f64>,
    components: Vec<MultivariateNormal>,
}

impl GaussianMixture {
    pub fn new(weights: Vec<f64>, components: Vec<MultivariateNormal>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::domain("mixture needs at least one component".to_string()));
        }
        if weights.len() != components.len() {
            return Err(Error::domain(format!(
                "{} weights for {} components",
                weights.len(),
                components.len()
            )));
        }
        if weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(Error::domain("mixture weights must be non-negative".to_string()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!(
                "mixture weights sum to {total}, expected 1"
            )));
        }
        let n = components[0].dim();
        if components.iter().any(|c| c.dim() != n) {
            return Err(Error::domain(
                "mixture components must share one dimension".to_string(),
            ));
        }
        Ok(Self { weights, components })
    }

    /// Equal-weight mixture.
    pub fn uniform(components: Vec<MultivariateNormal>) -> Result<Self> {
        let k = components.len();
        if k == 0 {
            return Err(Error::domain("mixture needs at least one component".to_string()));
        }
        // Make the weights sum to 1 exactly, not just within rounding.
        let mut weights = vec![1.0 / k as f64; k];
        let partial: f64 = weights[..k - 1].iter().sum();
        weights[k - 1] = 1.0 - partial;
        Self::new(weights, components)
    }

    pub fn dim(&self) -> usize {
        self.components[0].dim()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn components(&self) -> &[MultivariateNormal] {
        &self.components
    }
}

/// Raw observations, one row per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSamples {
    data: Mat,
}

impl EmpiricalSamples {
    pub fn new(data: Mat) -> Result<Self> {
        if data.rows() == 0 || data.cols() == 0 {
            return Err(Error::domain("sample set must be non-empty".to_string()));
        }
        if !data.is_finite() {
            return Err(Error::domain("sample set contains non-finite entries".to_string()));
        }
        Ok(Self { data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::domain("sample set must be non-empty".to_string()));
        }
        let n = rows[0].len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::domain("sample rows must share one dimension".to_string()));
        }
        Self::new(Mat::from_rows(rows))
    }

    pub fn dim(&self) -> usize {
        self.data.cols()
    }

    pub fn count(&self) -> usize {
        self.data.rows()
    }

    pub fn data(&self) -> &Mat {
        &self.data
    }
}

/// One of the three distribution kinds.
#[derive(Debug, Clone, PartialEq)]
pub enum DistributionKind {
    Normal(MultivariateNormal),
    Mixture(GaussianMixture),
    Samples(EmpiricalSamples),
}

/// A distribution over ℝⁿ with an optional display name.
///
/// Immutable after construction; every operation is a pure function, and
/// sampling depends only on `(self, count, seed)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    pub name: Option<String>,
    pub kind: DistributionKind,
}

/// Affine map `x ↦ A·x + b` from ℝⁿ to ℝᵈ.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    matrix: Mat,
    offset: Vec<f64>,
}

impl AffineMap {
    pub fn new(matrix: Mat, offset: Vec<f64>) -> Result<Self> {
        if offset.len() != matrix.rows() {
            return Err(Error::domain(format!(
                "offset has dimension {} but map has {} rows",
                offset.len(),
                matrix.rows()
            )));
        }
        Ok(Self { matrix, offset })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: Mat::identity(n),
            offset: vec![0.0; n],
        }
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn offset(&self) -> &[f64] {
        &self.offset
    }

    pub fn in_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn out_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        add_vec(&self.matrix.mul_vec(x), &self.offset)
    }
}

impl Distribution {
    pub fn normal(mean: Vec<f64>, cov: SymMatrix) -> Result<Self> {
        Ok(Self {
            name: None,
            kind: DistributionKind::Normal(MultivariateNormal::new(mean, cov)?),
        })
    }

    pub fn mixture(weights: Vec<f64>, components: Vec<MultivariateNormal>) -> Result<Self> {
        Ok(Self {
            name: None,
            kind: DistributionKind::Mixture(GaussianMixture::new(weights, components)?),
        })
    }

    pub fn samples(data: Mat) -> Result<Self> {
        Ok(Self {
            name: None,
            kind: DistributionKind::Samples(EmpiricalSamples::new(data)?),
        })
    }

    pub fn from_normal(normal: MultivariateNormal) -> Self {
        Self {
            name: None,
            kind: DistributionKind::Normal(normal),
        }
    }

    pub fn from_mixture(mixture: GaussianMixture) -> Self {
        Self {
            name: None,
            kind: DistributionKind::Mixture(mixture),
        }
    }

    pub fn from_samples(samples: EmpiricalSamples) -> Self {
        Self {
            name: None,
            kind: DistributionKind::Samples(samples),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            DistributionKind::Normal(d) => d.dim(),
            DistributionKind::Mixture(d) => d.dim(),
            DistributionKind::Samples(d) => d.dim(),
        }
    }

    /// Mean vector and covariance matrix.
    ///
    /// Mixtures use the law of total covariance; sample sets use the sample
    /// mean and the unbiased (k−1 divisor) covariance. A single sample has
    /// no spread estimate, so its covariance is zero (logged).
    pub fn moments(&self) -> (Vec<f64>, SymMatrix) {
        match &self.kind {
            DistributionKind::Normal(d) => (d.mean.clone(), d.cov.clone()),
            DistributionKind::Mixture(d) => mixture_moments(d),
            DistributionKind::Samples(d) => sample_moments(&d.data),
        }
    }

    /// Draw `count` rows with the fixed generator; a pure function of
    /// `(self, count, seed)` on every platform.
    pub fn sample(&self, count: usize, seed: u64) -> Mat {
        let mut rng = Rng::new(seed);
        match &self.kind {
            DistributionKind::Normal(d) => {
                let sampler = NormalSampler::new(d);
                Mat::from_rows(
                    &(0..count)
                        .map(|_| sampler.draw(&mut rng))
                        .collect::<Vec<_>>(),
                )
            }
            DistributionKind::Mixture(d) => {
                let samplers: Vec<NormalSampler> =
                    d.components.iter().map(NormalSampler::new).collect();
                let mut rows = Vec::with_capacity(count);
                for _ in 0..count {
                    let u = rng.next_f64();
                    let mut acc = 0.0;
                    let mut chosen = d.components.len() - 1;
                    for (i, &w) in d.weights.iter().enumerate() {
                        acc += w;
                        if u < acc {
                            chosen = i;
                            break;
                        }
                    }
                    rows.push(samplers[chosen].draw(&mut rng));
                }
                Mat::from_rows(&rows)
            }
            DistributionKind::Samples(d) => {
                let k = d.data.rows();
                Mat::from_rows(
                    &(0..count)
                        .map(|_| d.data.row_vec(rng.next_index(k)))
                        .collect::<Vec<_>>(),
                )
            }
        }
    }

    /// Probability density at `x`.
    ///
    /// Gaussians with a covariance that stays singular through the jitter
    /// ladder have no density; that is an explicit error, never a made-up
    /// number. Sample sets answer with the density of a default-bandwidth
    /// KDE fit, which is a smoothed estimate rather than an empirical mass.
    pub fn pdf(&self, x: &[f64]) -> Result<f64> {
        Ok(self.density()?.at(x))
    }

    /// Prepared density evaluator; factorizations happen once here, so
    /// evaluating on a grid costs one solve per point.
    pub fn density(&self) -> Result<Density> {
        match &self.kind {
            DistributionKind::Normal(d) => Ok(Density {
                weights: vec![1.0],
                kernels: vec![NormalDensity::new(d)?],
            }),
            DistributionKind::Mixture(d) => Ok(Density {
                weights: d.weights.clone(),
                kernels: d
                    .components
                    .iter()
                    .map(NormalDensity::new)
                    .collect::<Result<Vec<_>>>()?,
            }),
            DistributionKind::Samples(d) => {
                let kde = crate::estimation::fit_kde(&d.data, crate::estimation::BandwidthRule::Scott)?;
                Distribution::from_mixture(kde).density()
            }
        }
    }

    /// Restriction to the listed coordinates, in the listed order.
    pub fn marginal(&self, dims: &[usize]) -> Result<Distribution> {
        let n = self.dim();
        if dims.is_empty() {
            return Err(Error::domain("marginal needs at least one dimension".to_string()));
        }
        for (i, &d) in dims.iter().enumerate() {
            if d >= n {
                return Err(Error::domain(format!(
                    "marginal dimension {d} out of range for a {n}-dimensional distribution"
                )));
            }
            if dims[..i].contains(&d) {
                return Err(Error::domain(format!("marginal dimension {d} repeated")));
            }
        }
        let kind = match &self.kind {
            DistributionKind::Normal(d) => DistributionKind::Normal(marginal_normal(d, dims)),
            DistributionKind::Mixture(d) => DistributionKind::Mixture(GaussianMixture {
                weights: d.weights.clone(),
                components: d.components.iter().map(|c| marginal_normal(c, dims)).collect(),
            }),
            DistributionKind::Samples(d) => {
                let data = Mat::from_fn(d.data.rows(), dims.len(), |i, j| {
                    d.data.get(i, dims[j])
                });
                DistributionKind::Samples(EmpiricalSamples { data })
            }
        };
        Ok(Distribution {
            name: self.name.clone(),
            kind,
        })
    }

    /// Push-forward through `x ↦ A·x + b`.
    ///
    /// Gaussians map in closed form to `N(Aμ+b, AΣAᵀ)`, mixtures map
    /// component-wise, and sample sets map row-wise.
    pub fn affine_transform(&self, map: &AffineMap) -> Result<Distribution> {
        if map.in_dim() != self.dim() {
            return Err(Error::domain(format!(
                "map expects dimension {} but distribution has {}",
                map.in_dim(),
                self.dim()
            )));
        }
        let kind = match &self.kind {
            DistributionKind::Normal(d) => {
                DistributionKind::Normal(affine_normal(d, map)?)
            }
            DistributionKind::Mixture(d) => DistributionKind::Mixture(GaussianMixture {
                weights: d.weights.clone(),
                components: d
                    .components
                    .iter()
                    .map(|c| affine_normal(c, map))
                    .collect::<Result<Vec<_>>>()?,
            }),
            DistributionKind::Samples(d) => {
                let rows: Vec<Vec<f64>> = (0..d.data.rows())
                    .map(|i| map.apply(d.data.row(i)))
                    .collect();
                DistributionKind::Samples(EmpiricalSamples {
                    data: Mat::from_rows(&rows),
                })
            }
        };
        Ok(Distribution {
            name: self.name.clone(),
            kind,
        })
    }
}

/// Reusable sampler: the Cholesky factor is computed once.
struct NormalSampler<'a> {
    mean: &'a [f64],
    l: Mat,
}

impl<'a> NormalSampler<'a> {
    fn new(d: &'a MultivariateNormal) -> Self {
        let factor = cholesky_psd(&d.cov)
            .expect("constructor guarantees a PSD covariance");
        Self {
            mean: &d.mean,
            l: factor.l,
        }
    }

    fn draw(&self, rng: &mut Rng) -> Vec<f64> {
        let n = self.mean.len();
        let z: Vec<f64> = (0..n).map(|_| rng.next_normal()).collect();
        add_vec(&self.l.mul_vec(&z), self.mean)
    }
}

/// Prepared mixture density: weighted sum of Gaussian kernels.
pub struct Density {
    weights: Vec<f64>,
    kernels: Vec<NormalDensity>,
}

impl Density {
    pub fn at(&self, x: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(&self.kernels)
            .map(|(w, k)| w * k.at(x))
            .sum()
    }
}

struct NormalDensity {
    mean: Vec<f64>,
    l: Mat,
    log_norm: f64,
}

impl NormalDensity {
    fn new(d: &MultivariateNormal) -> Result<Self> {
        let n = d.dim() as f64;
        let factor = cholesky_pd_jittered(&d.cov)?;
        let log_det_half: f64 = (0..d.dim()).map(|i| factor.l.get(i, i).ln()).sum();
        Ok(Self {
            mean: d.mean.clone(),
            l: factor.l,
            log_norm: -0.5 * n * (2.0 * std::f64::consts::PI).ln() - log_det_half,
        })
    }

    fn at(&self, x: &[f64]) -> f64 {
        let centered = sub_vec(x, &self.mean);
        let y = solve_lower(&self.l, &centered);
        let maha2: f64 = y.iter().map(|v| v * v).sum();
        (self.log_norm - 0.5 * maha2).exp()
    }
}

fn mixture_moments(d: &GaussianMixture) -> (Vec<f64>, SymMatrix) {
    let n = d.dim();
    let mut mean = vec![0.0; n];
    for (w, c) in d.weights.iter().zip(&d.components) {
        for i in 0..n {
            mean[i] += w * c.mean[i];
        }
    }
    let mut cov = Mat::zeros(n, n);
    for (w, c) in d.weights.iter().zip(&d.components) {
        for i in 0..n {
            for j in 0..n {
                cov.set(
                    i,
                    j,
                    cov.get(i, j) + w * (c.cov.get(i, j) + c.mean[i] * c.mean[j]),
                );
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            cov.set(i, j, cov.get(i, j) - mean[i] * mean[j]);
        }
    }
    (mean, SymMatrix::new(&cov).expect("moment matrix is square and finite"))
}

pub(crate) fn sample_moments(data: &Mat) -> (Vec<f64>, SymMatrix) {
    let k = data.rows();
    let n = data.cols();
    let mut mean = vec![0.0; n];
    for i in 0..k {
        for j in 0..n {
            mean[j] += data.get(i, j);
        }
    }
    for m in mean.iter_mut() {
        *m /= k as f64;
    }
    if k == 1 {
        log::info!("single observation: sample covariance set to zero");
        return (mean, SymMatrix::zeros(n));
    }
    let mut cov = Mat::zeros(n, n);
    for i in 0..k {
        let row = data.row(i);
        for a in 0..n {
            let da = row[a] - mean[a];
            for b in 0..n {
                cov.set(a, b, cov.get(a, b) + da * (row[b] - mean[b]));
            }
        }
    }
    let denom = (k - 1) as f64;
    for a in 0..n {
        for b in 0..n {
            cov.set(a, b, cov.get(a, b) / denom);
        }
    }
    (mean, SymMatrix::new(&cov).expect("moment matrix is square and finite"))
}

fn marginal_normal(d: &MultivariateNormal, dims: &[usize]) -> MultivariateNormal {
    MultivariateNormal {
        mean: dims.iter().map(|&i| d.mean[i]).collect(),
        cov: d.cov.select(dims),
    }
}

fn affine_normal(d: &MultivariateNormal, map: &AffineMap) -> Result<MultivariateNormal> {
    let mean = map.apply(&d.mean);
    let cov = d.cov.congruence(&map.matrix);
    MultivariateNormal::new(mean, cov)
}
