//! Contour geometry and quantile summaries in data space, shared by the 2D
//! and matrix views.
//!
//! Gaussians get exact ellipse isolines; everything else goes through the
//! highest-density-region route: a density threshold estimated from seeded
//! draws, then level curves traced on a fixed grid.

use crate::distribution::{Distribution, DistributionKind};
use crate::error::Result;
use crate::numerics::matrix::Mat;
use crate::numerics::{cholesky_psd, mahalanobis_radius, marching_squares, normal_quantile};
use crate::viz::PlotStyle;

/// One contour component in data coordinates.
#[derive(Debug, Clone)]
pub(crate) struct Loop {
    pub points: Vec<[f64; 2]>,
    pub closed: bool,
}

/// Axis-aligned data rectangle used as the density sampling window.
#[derive(Debug, Clone, Copy)]
pub(crate) struct DensityBox {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl DensityBox {
    /// Mean ± 4σ per axis for model distributions, sample bounding box
    /// expanded by 10% for empirical ones.
    pub fn covering(dist: &Distribution) -> Self {
        match &dist.kind {
            DistributionKind::Normal(_) | DistributionKind::Mixture(_) => {
                let (mean, cov) = dist.moments();
                let half = |k: usize| {
                    let s = cov.get(k, k).max(0.0).sqrt();
                    if s > 0.0 {
                        4.0 * s
                    } else {
                        0.5
                    }
                };
                Self {
                    x: (mean[0] - half(0), mean[0] + half(0)),
                    y: (mean[1] - half(1), mean[1] + half(1)),
                }
            }
            DistributionKind::Samples(s) => {
                let data = s.data();
                let axis = |k: usize| {
                    let mut lo = f64::INFINITY;
                    let mut hi = f64::NEG_INFINITY;
                    for r in 0..data.rows() {
                        lo = lo.min(data.get(r, k));
                        hi = hi.max(data.get(r, k));
                    }
                    let pad = if hi > lo { 0.05 * (hi - lo) } else { 0.5 };
                    (lo - pad, hi + pad)
                };
                Self {
                    x: axis(0),
                    y: axis(1),
                }
            }
        }
    }
}

/// Per-distribution precomputation for one or more contour levels.
pub(crate) enum ContourSource {
    /// Exact Gaussian isolines from the covariance factor.
    Analytic { mean: Vec<f64>, l: Mat },
    /// Density grid plus the sorted density values of the threshold draws.
    Density {
        grid: Mat,
        window: DensityBox,
        sorted_pdf: Vec<f64>,
    },
}

/// Decide the contour route for a 2D distribution and do the heavy setup
/// once. `window` overrides the density sampling box (used by the matrix
/// view to keep cell axes shared); the analytic route ignores it.
pub(crate) fn contour_source(
    dist: &Distribution,
    seed: u64,
    style: &PlotStyle,
    window: Option<DensityBox>,
) -> Result<ContourSource> {
    if let DistributionKind::Normal(normal) = &dist.kind {
        if let Ok(factor) = cholesky_psd(normal.cov()) {
            let full_rank = (0..2).all(|k| factor.l.get(k, k) > 0.0);
            if factor.jitter == 0.0 && full_rank {
                return Ok(ContourSource::Analytic {
                    mean: normal.mean().to_vec(),
                    l: factor.l,
                });
            }
        }
        log::warn!("singular Gaussian covariance; falling back to density contours");
    }

    let window = window.unwrap_or_else(|| DensityBox::covering(dist));
    let density = dist.density()?;
    let res = style.grid_resolution;
    let dx = (window.x.1 - window.x.0) / (res - 1) as f64;
    let dy = (window.y.1 - window.y.0) / (res - 1) as f64;
    let grid = Mat::from_fn(res, res, |r, c| {
        density.at(&[window.x.0 + c as f64 * dx, window.y.0 + r as f64 * dy])
    });

    let draws = dist.sample(style.threshold_draws, seed);
    let mut sorted_pdf: Vec<f64> = (0..draws.rows())
        .map(|r| density.at(draws.row(r)))
        .collect();
    sorted_pdf.sort_by(|a, b| a.partial_cmp(b).expect("finite densities"));

    Ok(ContourSource::Density {
        grid,
        window,
        sorted_pdf,
    })
}

/// Contour components for probability level `q`.
pub(crate) fn level_loops(source: &ContourSource, q: f64, style: &PlotStyle) -> Result<Vec<Loop>> {
    match source {
        ContourSource::Analytic { mean, l } => {
            let radius = mahalanobis_radius(q)?;
            let segments = style.contour_segments;
            let points = (0..segments)
                .map(|k| {
                    let t = 2.0 * std::f64::consts::PI * k as f64 / segments as f64;
                    let (s, c) = t.sin_cos();
                    [
                        mean[0] + radius * (l.get(0, 0) * c + l.get(0, 1) * s),
                        mean[1] + radius * (l.get(1, 0) * c + l.get(1, 1) * s),
                    ]
                })
                .collect();
            Ok(vec![Loop {
                points,
                closed: true,
            }])
        }
        ContourSource::Density {
            grid,
            window,
            sorted_pdf,
        } => {
            let threshold = hdr_threshold(sorted_pdf, q);
            let res = grid.rows();
            let dx = (window.x.1 - window.x.0) / (res - 1) as f64;
            let dy = (window.y.1 - window.y.0) / (res - 1) as f64;
            Ok(marching_squares(grid, threshold)
                .into_iter()
                .map(|poly| Loop {
                    points: poly
                        .points
                        .iter()
                        .map(|p| [window.x.0 + p[0] * dx, window.y.0 + p[1] * dy])
                        .collect(),
                    closed: poly.closed,
                })
                .collect())
        }
    }
}

/// Density threshold whose super-level set holds mass `q`: the (1−q)
/// quantile of the density values seen at the threshold draws.
pub(crate) fn hdr_threshold(sorted_pdf: &[f64], q: f64) -> f64 {
    quantile_type7(sorted_pdf, 1.0 - q)
}

/// Linear-interpolation sample quantile (type 7) of ascending values.
pub(crate) fn quantile_type7(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Quantiles of a 1D distribution: closed-form for Gaussians, otherwise
/// from `style.summary_draws` seeded draws.
pub(crate) fn quantiles_1d(
    dist: &Distribution,
    probs: &[f64],
    style: &PlotStyle,
    seed: u64,
) -> Result<Vec<f64>> {
    if let DistributionKind::Normal(normal) = &dist.kind {
        let mu = normal.mean()[0];
        let sigma = normal.cov().get(0, 0).max(0.0).sqrt();
        return probs
            .iter()
            .map(|&p| Ok(mu + normal_quantile(p)? * sigma))
            .collect();
    }
    let draws = sorted_draws_1d(dist, style.summary_draws, seed);
    Ok(probs.iter().map(|&p| quantile_type7(&draws, p)).collect())
}

pub(crate) fn sorted_draws_1d(dist: &Distribution, count: usize, seed: u64) -> Vec<f64> {
    let mat = dist.sample(count, seed);
    let mut values: Vec<f64> = (0..mat.rows()).map(|r| mat.get(r, 0)).collect();
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite draws"));
    values
}

/// Isolines of the probability-`q` region of a 2D distribution, in data
/// coordinates rather than screen coordinates: one point list per connected
/// component. This is the geometry the contour plots draw, exposed for
/// callers that want the curves without an SVG around them.
pub fn isoline_loops(
    dist: &Distribution,
    q: f64,
    style: &PlotStyle,
    seed: u64,
) -> Result<Vec<Vec<[f64; 2]>>> {
    crate::viz::validate_style(style)?;
    crate::viz::require_dim(std::slice::from_ref(dist), 2)?;
    crate::viz::QuantileSpec::new(vec![q])?;
    let source = contour_source(dist, seed, style, None)?;
    Ok(level_loops(&source, q, style)?
        .into_iter()
        .map(|l| l.points)
        .collect())
}

/// Density value bounding the probability-`q` region, estimated the way the
/// highest-density-region route does it: the (1−q) quantile of the density
/// at `style.threshold_draws` seeded draws. Unlike the plots, which take an
/// exact route for full-rank Gaussians, this always measures the estimate,
/// so it also serves as a cross-check of that route. Any dimension works.
pub fn density_threshold(
    dist: &Distribution,
    q: f64,
    style: &PlotStyle,
    seed: u64,
) -> Result<f64> {
    crate::viz::validate_style(style)?;
    crate::viz::QuantileSpec::new(vec![q])?;
    let density = dist.density()?;
    let draws = dist.sample(style.threshold_draws, seed);
    let mut sorted: Vec<f64> = (0..draws.rows())
        .map(|r| density.at(draws.row(r)))
        .collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite densities"));
    Ok(hdr_threshold(&sorted, q))
}
