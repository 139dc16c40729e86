//! Quantile isolines and isobands for 2D distributions.

use crate::distribution::Distribution;
use crate::error::Result;
use crate::viz::document::{Element, PlotDocument, ViewBox};
use crate::viz::geometry::{contour_source, level_loops, Loop};
use crate::viz::scale::{draw_axes, Frame, Rect};
use crate::viz::{color, label, require_dim, validate_style, PlotStyle, QuantileSpec};

const BAND_OPACITY_INNER: f64 = 0.45;
const BAND_OPACITY_OUTER: f64 = 0.15;

/// Draw one isoline per quantile level and distribution; with `bands` also
/// fill the regions between consecutive levels (even-odd rule, opacity
/// falling from innermost to outermost band). A single level with `bands`
/// fills that level's whole region at the innermost opacity.
///
/// Gaussians get exact ellipses; mixtures, empirical data, and singular
/// Gaussians get highest-density-region contours traced on a seeded density
/// grid.
pub fn render_contours(
    dists: &[Distribution],
    q: &QuantileSpec,
    bands: bool,
    style: &PlotStyle,
    seed: u64,
) -> Result<PlotDocument> {
    validate_style(style)?;
    require_dim(dists, 2)?;

    // All geometry in data space first, so the shared frame can cover it.
    let mut per_dist: Vec<Vec<(f64, Vec<Loop>)>> = Vec::with_capacity(dists.len());
    for (i, dist) in dists.iter().enumerate() {
        let source = contour_source(dist, seed.wrapping_add(i as u64), style, None)?;
        let mut levels = Vec::with_capacity(q.levels().len());
        for &level in q.levels() {
            levels.push((level, level_loops(&source, level, style)?));
        }
        per_dist.push(levels);
    }

    let mut x = (f64::INFINITY, f64::NEG_INFINITY);
    let mut y = (f64::INFINITY, f64::NEG_INFINITY);
    for levels in &per_dist {
        for (_, loops) in levels {
            for lp in loops {
                for p in &lp.points {
                    x = (x.0.min(p[0]), x.1.max(p[0]));
                    y = (y.0.min(p[1]), y.1.max(p[1]));
                }
            }
        }
    }
    if !x.0.is_finite() {
        x = (0.0, 1.0);
        y = (0.0, 1.0);
    }

    let frame = Frame::new(x, y, Rect::padded(style.width, style.height, style.padding));
    let mut doc = PlotDocument::new(ViewBox {
        width: style.width,
        height: style.height,
        x_data: frame.x_data(),
        y_data: frame.y_data(),
    });
    draw_axes(&mut doc, &frame, style.stroke_width);

    for (i, (dist, levels)) in dists.iter().zip(&per_dist).enumerate() {
        let fill = color(style, i).to_string();
        doc.legend.push((label(dist, i), fill.clone()));

        if bands {
            let band_count = levels.len().saturating_sub(1).max(1);
            let opacity = |k: usize| {
                if band_count == 1 {
                    BAND_OPACITY_INNER
                } else {
                    BAND_OPACITY_INNER
                        - (BAND_OPACITY_INNER - BAND_OPACITY_OUTER) * k as f64
                            / (band_count - 1) as f64
                }
            };
            if levels.len() == 1 {
                doc.bands.push(band_path(&[&levels[0].1], &frame, &fill, opacity(0)));
            } else {
                for k in 0..levels.len() - 1 {
                    doc.bands.push(band_path(
                        &[&levels[k + 1].1, &levels[k].1],
                        &frame,
                        &fill,
                        opacity(k),
                    ));
                }
            }
        }

        for (_, loops) in levels {
            for lp in loops {
                let points: Vec<[f64; 2]> = lp.points.iter().map(|&p| frame.map(p)).collect();
                if lp.closed {
                    doc.lines.push(Element::Polygon {
                        points,
                        fill: "none".to_string(),
                        stroke: Some(fill.clone()),
                        width: style.stroke_width,
                        opacity: None,
                    });
                } else {
                    doc.lines.push(Element::Polyline {
                        points,
                        stroke: fill.clone(),
                        width: style.stroke_width,
                    });
                }
            }
        }
    }

    Ok(doc)
}

/// Even-odd fill across the rings of one or two levels: outer level plus
/// inner level punches the annulus between them.
fn band_path(levels: &[&Vec<Loop>], frame: &Frame, fill: &str, opacity: f64) -> Element {
    let mut subpaths = Vec::new();
    for loops in levels {
        for lp in loops.iter() {
            subpaths.push(lp.points.iter().map(|&p| frame.map(p)).collect());
        }
    }
    Element::Path {
        subpaths,
        fill: fill.to_string(),
        opacity,
    }
}
