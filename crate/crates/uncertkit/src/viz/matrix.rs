//! Pairwise plot matrix for n-dimensional distributions.
//!
//! Cell (r, c) off the diagonal shows the bivariate marginal onto
//! dimensions (c, r), so (r, c) and (c, r) are transposes of each other;
//! the diagonal shows each dimension's univariate marginal. Axis ranges are
//! shared per row and per column (the diagonal's vertical axis is a density
//! scale). Density grids in cells run at half the configured resolution to
//! keep n² cells affordable.

use std::str::FromStr;

use crate::distribution::{Distribution, DistributionKind};
use crate::error::{Error, Result};
use crate::viz::document::{Anchor, Element, PlotDocument, ViewBox};
use crate::viz::geometry::{contour_source, level_loops, DensityBox};
use crate::viz::scale::{fmt_tick, nice_ticks, tick_step, Frame, LinScale, Rect, AXIS_COLOR, TICK_FONT, TICK_LEN};
use crate::viz::{color, label, require_dim, validate_style, PlotStyle, QuantileSpec};

/// Content of off-diagonal cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OffDiag {
    Contour,
    Scatter,
}

impl FromStr for OffDiag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "contour" => Ok(Self::Contour),
            "scatter" => Ok(Self::Scatter),
            other => Err(Error::domain(format!(
                "unknown off-diagonal cell kind {other:?}; expected contour or scatter"
            ))),
        }
    }
}

/// Content of diagonal cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagKind {
    Violin,
    Density,
}

impl FromStr for DiagKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "violin" => Ok(Self::Violin),
            "density" => Ok(Self::Density),
            other => Err(Error::domain(format!(
                "unknown diagonal cell kind {other:?}; expected violin or density"
            ))),
        }
    }
}

/// Fraction of each cell kept as inner margin.
const CELL_INSET: f64 = 0.08;

pub(crate) fn cell_rect(style: &PlotStyle, n: usize, r: usize, c: usize) -> Rect {
    let outer = Rect::padded(style.width, style.height, style.padding);
    let cw = (outer.x1 - outer.x0) / n as f64;
    let ch = (outer.y1 - outer.y0) / n as f64;
    Rect {
        x0: outer.x0 + c as f64 * cw,
        y0: outer.y0 + r as f64 * ch,
        x1: outer.x0 + (c + 1) as f64 * cw,
        y1: outer.y0 + (r + 1) as f64 * ch,
    }
}

/// Render the n×n matrix of all pairwise views.
pub fn render_matrix(
    dists: &[Distribution],
    off_diag: OffDiag,
    diag: DiagKind,
    q: &QuantileSpec,
    style: &PlotStyle,
    seed: u64,
) -> Result<PlotDocument> {
    validate_style(style)?;
    if dists.is_empty() {
        return Err(Error::domain("plot needs at least one distribution".to_string()));
    }
    let n = dists[0].dim();
    require_dim(dists, n)?;
    if n < 2 {
        return Err(Error::domain(
            "matrix view needs at least 2 dimensions; use a univariate plot for 1D".to_string(),
        ));
    }

    let samples: Vec<_> = match off_diag {
        OffDiag::Scatter => dists
            .iter()
            .enumerate()
            .map(|(i, d)| Some(d.sample(style.sample_points, seed.wrapping_add(i as u64))))
            .collect(),
        OffDiag::Contour => vec![None; dists.len()],
    };

    let ranges = dim_ranges(dists, &samples, n);
    let mut cell_style = style.clone();
    cell_style.grid_resolution = (style.grid_resolution / 2).max(16);
    let curve_steps = cell_style.grid_resolution;

    let mut doc = PlotDocument::new(ViewBox {
        width: style.width,
        height: style.height,
        x_data: (0.0, n as f64),
        y_data: (0.0, n as f64),
    });
    for (i, dist) in dists.iter().enumerate() {
        doc.legend.push((label(dist, i), color(style, i).to_string()));
    }

    for r in 0..n {
        for c in 0..n {
            let cell = cell_rect(style, n, r, c);
            doc.axes.push(Element::Polygon {
                points: vec![
                    [cell.x0, cell.y0],
                    [cell.x1, cell.y0],
                    [cell.x1, cell.y1],
                    [cell.x0, cell.y1],
                ],
                fill: "none".to_string(),
                stroke: Some(AXIS_COLOR.to_string()),
                width: 0.75 * style.stroke_width,
                opacity: None,
            });
            let inner = cell.inset(CELL_INSET);

            if r == c {
                draw_diagonal(&mut doc, dists, r, diag, ranges[r], inner, curve_steps, style)?;
            } else {
                let frame = Frame::new(ranges[c], ranges[r], inner);
                for (i, dist) in dists.iter().enumerate() {
                    let fill = color(style, i).to_string();
                    match off_diag {
                        OffDiag::Scatter => {
                            let mat = samples[i].as_ref().expect("sampled for scatter");
                            for row in 0..mat.rows() {
                                let p = frame.map([mat.get(row, c), mat.get(row, r)]);
                                doc.points.push(Element::Circle {
                                    cx: p[0],
                                    cy: p[1],
                                    r: style.point_radius,
                                    fill: fill.clone(),
                                });
                            }
                        }
                        OffDiag::Contour => {
                            let marginal = dist.marginal(&[c, r])?;
                            let window = DensityBox {
                                x: ranges[c],
                                y: ranges[r],
                            };
                            let source = contour_source(
                                &marginal,
                                seed.wrapping_add(i as u64),
                                &cell_style,
                                Some(window),
                            )?;
                            for &level in q.levels() {
                                for lp in level_loops(&source, level, &cell_style)? {
                                    let points: Vec<[f64; 2]> =
                                        lp.points.iter().map(|&p| frame.map(p)).collect();
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
                    }
                }
            }

            if r == n - 1 {
                draw_x_ticks(&mut doc, ranges[c], cell, inner, style);
            }
            if c == 0 && r != 0 {
                draw_y_ticks(&mut doc, ranges[r], cell, inner, style);
            }
        }
    }

    Ok(doc)
}

/// Shared data range per dimension: moment boxes (mean ± 4σ) for model
/// distributions, padded bounding boxes for empirical ones, widened by any
/// scatter samples so every drawn point stays in its cell.
fn dim_ranges(
    dists: &[Distribution],
    samples: &[Option<crate::numerics::matrix::Mat>],
    n: usize,
) -> Vec<(f64, f64)> {
    let mut ranges = vec![(f64::INFINITY, f64::NEG_INFINITY); n];
    for dist in dists {
        match &dist.kind {
            DistributionKind::Normal(_) | DistributionKind::Mixture(_) => {
                let (mean, cov) = dist.moments();
                for k in 0..n {
                    let s = cov.get(k, k).max(0.0).sqrt();
                    let half = if s > 0.0 { 4.0 * s } else { 0.5 };
                    ranges[k] = (ranges[k].0.min(mean[k] - half), ranges[k].1.max(mean[k] + half));
                }
            }
            DistributionKind::Samples(s) => {
                let data = s.data();
                for k in 0..n {
                    let mut lo = f64::INFINITY;
                    let mut hi = f64::NEG_INFINITY;
                    for row in 0..data.rows() {
                        lo = lo.min(data.get(row, k));
                        hi = hi.max(data.get(row, k));
                    }
                    let pad = if hi > lo { 0.05 * (hi - lo) } else { 0.5 };
                    ranges[k] = (ranges[k].0.min(lo - pad), ranges[k].1.max(hi + pad));
                }
            }
        }
    }
    for mat in samples.iter().flatten() {
        for k in 0..n {
            for row in 0..mat.rows() {
                let v = mat.get(row, k);
                ranges[k] = (ranges[k].0.min(v), ranges[k].1.max(v));
            }
        }
    }
    ranges
}

#[allow(clippy::too_many_arguments)]
fn draw_diagonal(
    doc: &mut PlotDocument,
    dists: &[Distribution],
    dim: usize,
    diag: DiagKind,
    range: (f64, f64),
    inner: Rect,
    steps: usize,
    style: &PlotStyle,
) -> Result<()> {
    let x = LinScale::new(range.0, range.1, inner.x0, inner.x1);
    let span = range.1 - range.0;
    let values: Vec<f64> = (0..=steps)
        .map(|j| range.0 + span * j as f64 / steps as f64)
        .collect();

    let mut curves = Vec::with_capacity(dists.len());
    let mut max_density = 0.0f64;
    for dist in dists {
        let marginal = dist.marginal(&[dim])?;
        let density_fn = marginal.density()?;
        let curve: Vec<f64> = values.iter().map(|&v| density_fn.at(&[v])).collect();
        max_density = curve.iter().cloned().fold(max_density, f64::max);
        curves.push(curve);
    }
    let unit = |d: f64| if max_density > 0.0 { d / max_density } else { 0.0 };

    for (i, curve) in curves.iter().enumerate() {
        let fill = color(style, i).to_string();
        match diag {
            DiagKind::Density => {
                let amplitude = 0.9 * (inner.y1 - inner.y0);
                let points: Vec<[f64; 2]> = values
                    .iter()
                    .zip(curve)
                    .map(|(&v, &d)| [x.map(v), inner.y1 - unit(d) * amplitude])
                    .collect();
                doc.lines.push(Element::Polyline {
                    points,
                    stroke: fill,
                    width: style.stroke_width,
                });
            }
            DiagKind::Violin => {
                let mid = 0.5 * (inner.y0 + inner.y1);
                let amplitude = 0.45 * (inner.y1 - inner.y0);
                let mut points = Vec::with_capacity(2 * values.len());
                for (&v, &d) in values.iter().zip(curve) {
                    points.push([x.map(v), mid - unit(d) * amplitude]);
                }
                for (&v, &d) in values.iter().zip(curve).rev() {
                    points.push([x.map(v), mid + unit(d) * amplitude]);
                }
                doc.bands.push(Element::Polygon {
                    points,
                    fill: fill.clone(),
                    stroke: Some(fill),
                    width: style.stroke_width,
                    opacity: Some(0.45),
                });
            }
        }
    }

    doc.labels.push(Element::Text {
        x: 0.5 * (inner.x0 + inner.x1),
        y: inner.y0 + TICK_FONT,
        content: format!("dim {dim}"),
        anchor: Anchor::Middle,
        size: TICK_FONT,
    });
    Ok(())
}

fn draw_x_ticks(doc: &mut PlotDocument, range: (f64, f64), cell: Rect, inner: Rect, style: &PlotStyle) {
    let x = LinScale::new(range.0, range.1, inner.x0, inner.x1);
    let ticks = nice_ticks(range.0, range.1);
    if let Some(step) = tick_step(&ticks) {
        for &t in &ticks {
            let sx = x.map(t);
            doc.axes.push(Element::Polyline {
                points: vec![[sx, cell.y1], [sx, cell.y1 + TICK_LEN]],
                stroke: AXIS_COLOR.to_string(),
                width: 0.75 * style.stroke_width,
            });
            doc.labels.push(Element::Text {
                x: sx,
                y: cell.y1 + TICK_LEN + TICK_FONT,
                content: fmt_tick(t, step),
                anchor: Anchor::Middle,
                size: TICK_FONT,
            });
        }
    }
}

fn draw_y_ticks(doc: &mut PlotDocument, range: (f64, f64), cell: Rect, inner: Rect, style: &PlotStyle) {
    let y = LinScale::new(range.0, range.1, inner.y1, inner.y0);
    let ticks = nice_ticks(range.0, range.1);
    if let Some(step) = tick_step(&ticks) {
        for &t in &ticks {
            let sy = y.map(t);
            doc.axes.push(Element::Polyline {
                points: vec![[cell.x0 - TICK_LEN, sy], [cell.x0, sy]],
                stroke: AXIS_COLOR.to_string(),
                width: 0.75 * style.stroke_width,
            });
            doc.labels.push(Element::Text {
                x: cell.x0 - TICK_LEN - 2.0,
                y: sy + TICK_FONT * 0.35,
                content: fmt_tick(t, step),
                anchor: Anchor::End,
                size: TICK_FONT,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::matrix::SymMatrix;

    fn standard_3d() -> Vec<Distribution> {
        vec![Distribution::normal(vec![0.0; 3], SymMatrix::identity(3)).unwrap()]
    }

    #[test]
    fn grid_has_n_squared_cells() {
        let q = QuantileSpec::new(vec![0.5]).unwrap();
        let doc = render_matrix(
            &standard_3d(),
            OffDiag::Contour,
            DiagKind::Density,
            &q,
            &PlotStyle::default(),
            1,
        )
        .unwrap();
        let borders = doc
            .axes
            .iter()
            .filter(|el| matches!(el, Element::Polygon { .. }))
            .count();
        assert_eq!(borders, 9);
        // 6 bivariate isolines, 3 diagonal density curves.
        let polygons = doc
            .lines
            .iter()
            .filter(|el| matches!(el, Element::Polygon { .. }))
            .count();
        let curves = doc
            .lines
            .iter()
            .filter(|el| matches!(el, Element::Polyline { .. }))
            .count();
        assert_eq!(polygons, 6);
        assert_eq!(curves, 3);
        let titles: Vec<&str> = doc
            .labels
            .iter()
            .filter_map(|el| match el {
                Element::Text { content, .. } if content.starts_with("dim") => {
                    Some(content.as_str())
                }
                _ => None,
            })
            .collect();
        assert_eq!(titles, vec!["dim 0", "dim 1", "dim 2"]);
    }

    #[test]
    fn standard_normal_cells_show_the_median_circle() {
        let style = PlotStyle::default();
        let q = QuantileSpec::new(vec![0.5]).unwrap();
        let doc = render_matrix(
            &standard_3d(),
            OffDiag::Contour,
            DiagKind::Density,
            &q,
            &style,
            1,
        )
        .unwrap();
        let n = 3;
        let mut checked = 0;
        for el in &doc.lines {
            let Element::Polygon { points, .. } = el else {
                continue;
            };
            // Locate the cell this polygon sits in.
            let cx = points.iter().map(|p| p[0]).sum::<f64>() / points.len() as f64;
            let cy = points.iter().map(|p| p[1]).sum::<f64>() / points.len() as f64;
            let (mut row, mut col) = (usize::MAX, usize::MAX);
            for r in 0..n {
                for c in 0..n {
                    let cell = cell_rect(&style, n, r, c);
                    if cx >= cell.x0 && cx <= cell.x1 && cy >= cell.y0 && cy <= cell.y1 {
                        (row, col) = (r, c);
                    }
                }
            }
            assert_ne!(row, col, "isoline in a diagonal cell");
            let inner = cell_rect(&style, n, row, col).inset(CELL_INSET);
            // Ranges are mean ± 4σ = [-4, 4]; invert the cell mapping.
            for p in points {
                let vx = (p[0] - inner.x0) / (inner.x1 - inner.x0) * 8.0 - 4.0;
                let vy = (inner.y1 - p[1]) / (inner.y1 - inner.y0) * 8.0 - 4.0;
                let radius = (vx * vx + vy * vy).sqrt();
                assert!(
                    (radius - 1.1774100225154747).abs() < 1e-6,
                    "cell ({row},{col}) radius {radius}"
                );
            }
            checked += 1;
        }
        assert_eq!(checked, 6);
    }

    #[test]
    fn transposed_cells_swap_axis_ranges() {
        let cov = SymMatrix::from_diag(&[1.0, 16.0]);
        let dist = vec![Distribution::normal(vec![0.0, 0.0], cov).unwrap()];
        let style = PlotStyle::default();
        let q = QuantileSpec::new(vec![0.5]).unwrap();
        let doc =
            render_matrix(&dist, OffDiag::Contour, DiagKind::Density, &q, &style, 1).unwrap();
        // Dim ranges: dim0 ±4, dim1 ±16. Invert each isoline back to data
        // coordinates of its own cell.
        let mut spans = std::collections::BTreeMap::new();
        for el in &doc.lines {
            let Element::Polygon { points, .. } = el else {
                continue;
            };
            let cx = points.iter().map(|p| p[0]).sum::<f64>() / points.len() as f64;
            let cell01 = cell_rect(&style, 2, 0, 1);
            let (row, col) = if cx >= cell01.x0 { (0, 1) } else { (1, 0) };
            let inner = cell_rect(&style, 2, row, col).inset(CELL_INSET);
            let (xr, yr) = if col == 1 { (16.0, 4.0) } else { (4.0, 16.0) };
            let xs: Vec<f64> = points
                .iter()
                .map(|p| (p[0] - inner.x0) / (inner.x1 - inner.x0) * 2.0 * xr - xr)
                .collect();
            let ys: Vec<f64> = points
                .iter()
                .map(|p| (inner.y1 - p[1]) / (inner.y1 - inner.y0) * 2.0 * yr - yr)
                .collect();
            let span = |v: &[f64]| {
                v.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                    - v.iter().cloned().fold(f64::INFINITY, f64::min)
            };
            spans.insert((row, col), (span(&xs), span(&ys)));
        }
        let r = 1.1774100225154747;
        let (x01, y01) = spans[&(0, 1)];
        let (x10, y10) = spans[&(1, 0)];
        // Cell (0,1) shows dims (x=1, y=0): x span 2r·4, y span 2r·1.
        assert!((x01 - 2.0 * r * 4.0).abs() < 1e-6, "{x01}");
        assert!((y01 - 2.0 * r).abs() < 1e-6, "{y01}");
        assert!((x10 - 2.0 * r).abs() < 1e-6, "{x10}");
        assert!((y10 - 2.0 * r * 4.0).abs() < 1e-6, "{y10}");
    }

    #[test]
    fn scatter_cells_reuse_one_draw_per_distribution() {
        let style = PlotStyle {
            sample_points: 40,
            ..PlotStyle::default()
        };
        let q = QuantileSpec::default();
        let doc = render_matrix(
            &standard_3d(),
            OffDiag::Scatter,
            DiagKind::Violin,
            &q,
            &style,
            5,
        )
        .unwrap();
        // 6 off-diagonal cells × 40 points.
        assert_eq!(doc.points.len(), 240);
        // Violin diagonal adds 3 band polygons.
        assert_eq!(doc.bands.len(), 3);
    }

    #[test]
    fn render_is_deterministic() {
        let dists = vec![
            Distribution::normal(vec![0.0, 0.0, 0.0], SymMatrix::identity(3)).unwrap(),
            Distribution::normal(vec![3.0, 1.0, -1.0], SymMatrix::identity(3)).unwrap(),
        ];
        let q = QuantileSpec::new(vec![0.5, 0.9]).unwrap();
        let style = PlotStyle::default();
        let a = render_matrix(&dists, OffDiag::Contour, DiagKind::Violin, &q, &style, 3)
            .unwrap()
            .to_svg();
        let b = render_matrix(&dists, OffDiag::Contour, DiagKind::Violin, &q, &style, 3)
            .unwrap()
            .to_svg();
        assert_eq!(a, b);
    }

    #[test]
    fn input_contract() {
        let q = QuantileSpec::default();
        let style = PlotStyle::default();
        let mixed = vec![
            Distribution::normal(vec![0.0; 3], SymMatrix::identity(3)).unwrap(),
            Distribution::normal(vec![0.0; 2], SymMatrix::identity(2)).unwrap(),
        ];
        assert!(
            render_matrix(&mixed, OffDiag::Contour, DiagKind::Density, &q, &style, 0).is_err()
        );
        let one_d = vec![Distribution::normal(vec![0.0], SymMatrix::identity(1)).unwrap()];
        assert!(
            render_matrix(&one_d, OffDiag::Contour, DiagKind::Density, &q, &style, 0).is_err()
        );
        assert!(render_matrix(&[], OffDiag::Contour, DiagKind::Density, &q, &style, 0).is_err());
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("contour".parse::<OffDiag>().unwrap(), OffDiag::Contour);
        assert_eq!("violin".parse::<DiagKind>().unwrap(), DiagKind::Violin);
        assert!("heatmap".parse::<OffDiag>().is_err());
        assert!("rug".parse::<DiagKind>().is_err());
    }
}
