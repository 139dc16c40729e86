//! Deterministic SVG views of distribution lists.
//!
//! Four render operations cover the dimensionalities that come out of the
//! pipeline: [`render_scatter`] and [`render_contours`] for 2D,
//! [`render_univariate`] for 1D, and [`render_matrix`] for anything higher.
//! Every operation is a pure function of its inputs, style, and seed; the
//! serialized SVG is byte-identical across runs and platforms.

pub mod contour;
mod document;
mod geometry;
pub mod matrix;
pub mod scatter;
mod scale;
pub mod univariate;

pub use contour::render_contours;
pub use document::{Anchor, Element, PlotDocument, ViewBox};
pub use geometry::{density_threshold, isoline_loops};
pub use matrix::{render_matrix, DiagKind, OffDiag};
pub use scatter::render_scatter;
pub use univariate::{render_univariate, UnivariateKind};

use crate::distribution::Distribution;
use crate::error::{Error, Result};

/// Categorical palette (Tableau 10). Distribution `i` is always drawn in
/// `palette[i % palette.len()]`.
pub const PALETTE: [&str; 10] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc949", "#af7aa1", "#ff9da7",
    "#9c755f", "#bab0ac",
];

/// Visual parameters shared by all render operations.
///
/// Beyond raw geometry this carries the fixed quality knobs (curve segment
/// counts, density grid resolution, draw counts) so golden files stay pinned
/// while still being overridable.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotStyle {
    /// Total width in pixels.
    pub width: f64,
    /// Total height in pixels.
    pub height: f64,
    /// Outer padding as a fraction of width/height, in [0, 0.4].
    pub padding: f64,
    /// Ordered fill colors; must not be empty.
    pub palette: Vec<String>,
    /// Radius of sample markers in pixels.
    pub point_radius: f64,
    /// Stroke width for lines and outlines in pixels.
    pub stroke_width: f64,
    /// Vertices per analytic contour ellipse.
    pub contour_segments: usize,
    /// Node count per axis of the density grid used for empirical contours
    /// and violin curves.
    pub grid_resolution: usize,
    /// Seeded draws used to estimate a density threshold for one contour
    /// level.
    pub threshold_draws: usize,
    /// Seeded draws used for quantile summaries of non-Gaussian inputs.
    pub summary_draws: usize,
    /// Points shown by strip and swarm plots and by matrix scatter cells.
    pub sample_points: usize,
}

impl Default for PlotStyle {
    fn default() -> Self {
        Self {
            width: 640.0,
            height: 480.0,
            padding: 0.05,
            palette: PALETTE.iter().map(|c| c.to_string()).collect(),
            point_radius: 2.0,
            stroke_width: 1.0,
            contour_segments: 128,
            grid_resolution: 256,
            threshold_draws: 10_000,
            summary_draws: 10_000,
            sample_points: 100,
        }
    }
}

/// Probability levels for contour and band rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileSpec {
    levels: Vec<f64>,
}

impl QuantileSpec {
    /// Levels must be non-empty, strictly ascending, and inside (0, 1).
    pub fn new(levels: Vec<f64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::domain("quantile levels must not be empty".to_string()));
        }
        for (i, &q) in levels.iter().enumerate() {
            if !(q > 0.0 && q < 1.0) {
                return Err(Error::domain(format!(
                    "quantile level {q} at position {i} is outside (0, 1)"
                )));
            }
            if i > 0 && q <= levels[i - 1] {
                return Err(Error::domain(format!(
                    "quantile levels must be strictly ascending, got {} then {q}",
                    levels[i - 1]
                )));
            }
        }
        Ok(Self { levels })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }
}

impl Default for QuantileSpec {
    fn default() -> Self {
        Self {
            levels: vec![0.25, 0.5, 0.75, 0.95],
        }
    }
}

pub(crate) fn validate_style(style: &PlotStyle) -> Result<()> {
    if !(style.width > 0.0 && style.height > 0.0) {
        return Err(Error::domain(format!(
            "plot size must be positive, got {}x{}",
            style.width, style.height
        )));
    }
    if style.palette.is_empty() {
        return Err(Error::domain("palette must not be empty".to_string()));
    }
    if !(0.0..=0.4).contains(&style.padding) {
        return Err(Error::domain(format!(
            "padding fraction must be in [0, 0.4], got {}",
            style.padding
        )));
    }
    if style.contour_segments < 8 {
        return Err(Error::domain("contour_segments must be at least 8".to_string()));
    }
    if style.grid_resolution < 2 {
        return Err(Error::domain("grid_resolution must be at least 2".to_string()));
    }
    if style.threshold_draws < 2 || style.summary_draws < 2 {
        return Err(Error::domain("draw counts must be at least 2".to_string()));
    }
    if style.sample_points == 0 {
        return Err(Error::domain("sample_points must be at least 1".to_string()));
    }
    Ok(())
}

pub(crate) fn color(style: &PlotStyle, index: usize) -> &str {
    &style.palette[index % style.palette.len()]
}

pub(crate) fn label(dist: &Distribution, index: usize) -> String {
    dist.name
        .clone()
        .unwrap_or_else(|| format!("dist {index}"))
}

pub(crate) fn require_dim(dists: &[Distribution], want: usize) -> Result<()> {
    if dists.is_empty() {
        return Err(Error::domain("plot needs at least one distribution".to_string()));
    }
    for (i, dist) in dists.iter().enumerate() {
        if dist.dim() != want {
            return Err(Error::domain(format!(
                "distribution {i} is {}-dimensional but this view needs {want}D; \
                 take a marginal or run a dimensionality reduction first",
                dist.dim()
            )));
        }
    }
    Ok(())
}
