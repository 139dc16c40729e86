//! Box, violin, strip, and swarm views for 1D distributions.
//!
//! Every distribution gets one horizontal slot on a shared value axis.
//! Gaussian summaries are closed-form; everything else comes from seeded
//! draws, so repeated renders are byte-identical.

use std::str::FromStr;

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::numerics::rng::Rng;
use crate::viz::document::{Anchor, Element, PlotDocument, ViewBox};
use crate::viz::geometry::{quantiles_1d, sorted_draws_1d};
use crate::viz::scale::{draw_x_axis, draw_y_axis, Frame, Rect, TICK_FONT, TICK_LEN};
use crate::viz::{color, label, require_dim, validate_style, PlotStyle};

/// Probabilities marked by a box plot: whisker, quartile, median, quartile,
/// whisker.
const BOX_PROBS: [f64; 5] = [0.025, 0.25, 0.5, 0.75, 0.975];
/// Value range covered by a violin curve.
const VIOLIN_PROBS: [f64; 2] = [0.001, 0.999];

/// Decorrelates jitter streams from value draws made with the same seed.
const JITTER_STREAM: u64 = 0x9e3779b97f4a7c15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnivariateKind {
    Box,
    Violin,
    Strip,
    Swarm,
}

impl FromStr for UnivariateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "box" => Ok(Self::Box),
            "violin" => Ok(Self::Violin),
            "strip" => Ok(Self::Strip),
            "swarm" => Ok(Self::Swarm),
            other => Err(Error::domain(format!(
                "unknown univariate plot kind {other:?}; expected box, violin, strip, or swarm"
            ))),
        }
    }
}

enum SlotData {
    Box([f64; 5]),
    Violin { values: Vec<f64>, density: Vec<f64> },
    Points(Vec<f64>),
}

/// Render 1D distributions side by side. Distribution `i` uses seed
/// `seed + i` for any draws it needs and palette color `i`.
pub fn render_univariate(
    dists: &[Distribution],
    kind: UnivariateKind,
    style: &PlotStyle,
    seed: u64,
) -> Result<PlotDocument> {
    validate_style(style)?;
    require_dim(dists, 1)?;

    let mut slots = Vec::with_capacity(dists.len());
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (i, dist) in dists.iter().enumerate() {
        let dist_seed = seed.wrapping_add(i as u64);
        let data = match kind {
            UnivariateKind::Box => {
                let q = quantiles_1d(dist, &BOX_PROBS, style, dist_seed)?;
                SlotData::Box([q[0], q[1], q[2], q[3], q[4]])
            }
            UnivariateKind::Violin => {
                let range = quantiles_1d(dist, &VIOLIN_PROBS, style, dist_seed)?;
                let steps = style.grid_resolution;
                let span = range[1] - range[0];
                let values: Vec<f64> = (0..=steps)
                    .map(|j| range[0] + span * j as f64 / steps as f64)
                    .collect();
                let density_fn = dist.density()?;
                let density: Vec<f64> = values.iter().map(|&v| density_fn.at(&[v])).collect();
                SlotData::Violin { values, density }
            }
            UnivariateKind::Strip | UnivariateKind::Swarm => {
                SlotData::Points(sorted_draws_1d(dist, style.sample_points, dist_seed))
            }
        };
        let (s_lo, s_hi) = match &data {
            SlotData::Box(q) => (q[0], q[4]),
            SlotData::Violin { values, .. } => (values[0], *values.last().expect("grid points")),
            SlotData::Points(v) => (v[0], *v.last().expect("draws")),
        };
        lo = lo.min(s_lo);
        hi = hi.max(s_hi);
        slots.push(data);
    }

    let frame = Frame::new(
        (0.0, dists.len() as f64),
        (lo, hi),
        Rect::padded(style.width, style.height, style.padding),
    );
    let mut doc = PlotDocument::new(ViewBox {
        width: style.width,
        height: style.height,
        x_data: frame.x_data(),
        y_data: frame.y_data(),
    });
    draw_x_axis(&mut doc, &frame, style.stroke_width, false);
    draw_y_axis(&mut doc, &frame, style.stroke_width);

    let slot_w = frame.x.map(1.0) - frame.x.map(0.0);
    let half = 0.4 * slot_w;

    for (i, (dist, data)) in dists.iter().zip(&slots).enumerate() {
        let fill = color(style, i).to_string();
        doc.legend.push((label(dist, i), fill.clone()));
        let cx = frame.x.map(i as f64 + 0.5);

        match data {
            SlotData::Box(q) => {
                let y: Vec<f64> = q.iter().map(|&v| frame.y.map(v)).collect();
                let bh = 0.75 * half;
                doc.bands.push(Element::Polygon {
                    points: vec![[cx - bh, y[1]], [cx + bh, y[1]], [cx + bh, y[3]], [cx - bh, y[3]]],
                    fill: fill.clone(),
                    stroke: Some(fill.clone()),
                    width: style.stroke_width,
                    opacity: Some(0.3),
                });
                doc.lines.push(Element::Polyline {
                    points: vec![[cx - bh, y[2]], [cx + bh, y[2]]],
                    stroke: fill.clone(),
                    width: 2.0 * style.stroke_width,
                });
                for (inner, outer) in [(y[3], y[4]), (y[1], y[0])] {
                    doc.lines.push(Element::Polyline {
                        points: vec![[cx, inner], [cx, outer]],
                        stroke: fill.clone(),
                        width: style.stroke_width,
                    });
                    doc.lines.push(Element::Polyline {
                        points: vec![[cx - bh / 2.0, outer], [cx + bh / 2.0, outer]],
                        stroke: fill.clone(),
                        width: style.stroke_width,
                    });
                }
            }
            SlotData::Violin { values, density } => {
                let max = density.iter().cloned().fold(0.0f64, f64::max);
                let offset = |d: f64| if max > 0.0 { d / max * half } else { 0.0 };
                let mut points = Vec::with_capacity(2 * values.len());
                for (v, d) in values.iter().zip(density) {
                    points.push([cx + offset(*d), frame.y.map(*v)]);
                }
                for (v, d) in values.iter().zip(density).rev() {
                    points.push([cx - offset(*d), frame.y.map(*v)]);
                }
                doc.bands.push(Element::Polygon {
                    points,
                    fill: fill.clone(),
                    stroke: Some(fill.clone()),
                    width: style.stroke_width,
                    opacity: Some(0.45),
                });
            }
            SlotData::Points(values) => match kind {
                UnivariateKind::Strip => {
                    let mut jitter = Rng::new(seed.wrapping_add(i as u64) ^ JITTER_STREAM);
                    for &v in values {
                        let dx = (jitter.next_f64() - 0.5) * 2.0 * half;
                        doc.points.push(Element::Circle {
                            cx: cx + dx,
                            cy: frame.y.map(v),
                            r: style.point_radius,
                            fill: fill.clone(),
                        });
                    }
                }
                UnivariateKind::Swarm => {
                    swarm_place(&mut doc, values, cx, &frame, style, &fill);
                }
                _ => unreachable!("points data only built for strip and swarm"),
            },
        }

        doc.labels.push(Element::Text {
            x: cx,
            y: frame.y.s0 + TICK_LEN + TICK_FONT,
            content: label(dist, i),
            anchor: Anchor::Middle,
            size: TICK_FONT,
        });
    }

    Ok(doc)
}

/// Greedy beeswarm: walk values in ascending order and put each point into
/// the nearest lane (center, right, left, ...) where it keeps 2·radius
/// clearance from the lane's previous point. Lanes are 2·radius apart, so
/// cross-lane clearance holds by construction.
fn swarm_place(
    doc: &mut PlotDocument,
    sorted: &[f64],
    cx: f64,
    frame: &Frame,
    style: &PlotStyle,
    fill: &str,
) {
    let gap = 2.0 * style.point_radius;
    // Screen y of the last point per lane; lane k sits at signed offset
    // 0, +1, -1, +2, -2, ...
    let mut last: Vec<Option<f64>> = Vec::new();
    for &v in sorted {
        let y = frame.y.map(v);
        let mut k = 0usize;
        loop {
            if k == last.len() {
                last.push(None);
            }
            // Ascending values map to descending screen y.
            let free = match last[k] {
                None => true,
                Some(prev) => prev - y >= gap * (1.0 - 1e-12),
            };
            if free {
                last[k] = Some(y);
                let lane = if k == 0 {
                    0.0
                } else if k % 2 == 1 {
                    (k as f64 + 1.0) / 2.0
                } else {
                    -((k / 2) as f64)
                };
                doc.points.push(Element::Circle {
                    cx: cx + lane * gap,
                    cy: y,
                    r: style.point_radius,
                    fill: fill.to_string(),
                });
                break;
            }
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::matrix::SymMatrix;

    fn standard_1d() -> Distribution {
        Distribution::normal(vec![0.0], SymMatrix::identity(1)).unwrap()
    }

    fn pair() -> Vec<Distribution> {
        vec![
            standard_1d(),
            Distribution::normal(vec![3.0], SymMatrix::from_diag(&[0.25])).unwrap(),
        ]
    }

    #[test]
    fn box_marks_sit_at_gaussian_quantiles() {
        let style = PlotStyle::default();
        let doc = render_univariate(&[standard_1d()], UnivariateKind::Box, &style, 1).unwrap();
        let frame_y = |v: f64| {
            let (d0, d1) = doc.view_box.y_data;
            let pad = style.padding * style.height;
            let (s0, s1) = (style.height - pad, pad);
            s0 + (v - d0) / (d1 - d0) * (s1 - s0)
        };
        let Element::Polygon { points, .. } = &doc.bands[0] else {
            panic!("box polygon missing");
        };
        assert!((points[0][1] - frame_y(-0.6744897501960817)).abs() < 1e-9);
        assert!((points[2][1] - frame_y(0.6744897501960817)).abs() < 1e-9);
        let Element::Polyline { points: median, .. } = &doc.lines[0] else {
            panic!("median missing");
        };
        assert!((median[0][1] - frame_y(0.0)).abs() < 1e-9);
        // Whisker extremes.
        let Element::Polyline { points: upper, .. } = &doc.lines[1] else {
            panic!("whisker missing");
        };
        assert!((upper[1][1] - frame_y(1.9599639845400543)).abs() < 1e-9);
        let Element::Polyline { points: lower, .. } = &doc.lines[3] else {
            panic!("whisker missing");
        };
        assert!((lower[1][1] - frame_y(-1.9599639845400543)).abs() < 1e-9);
    }

    #[test]
    fn violin_is_mirrored_and_peaks_at_the_mode() {
        let style = PlotStyle::default();
        let doc = render_univariate(&[standard_1d()], UnivariateKind::Violin, &style, 1).unwrap();
        let Element::Polygon { points, .. } = &doc.bands[0] else {
            panic!("violin polygon missing");
        };
        let n = points.len() / 2;
        let cx = style.width / 2.0;
        let mut peak = (0.0f64, 0.0f64);
        for j in 0..n {
            let right = points[j];
            let left = points[2 * n - 1 - j];
            assert!((right[1] - left[1]).abs() < 1e-9, "y mismatch at {j}");
            let right_w = right[0] - cx;
            let left_w = cx - left[0];
            assert!((right_w - left_w).abs() < 1e-9, "asymmetric width at {j}");
            if right_w > peak.0 {
                peak = (right_w, right[1]);
            }
        }
        // The widest section sits at value 0 = vertical center.
        assert!((peak.1 - style.height / 2.0).abs() < 1.0, "peak at {}", peak.1);
    }

    #[test]
    fn strip_jitter_stays_inside_the_slot() {
        let style = PlotStyle::default();
        let doc = render_univariate(&pair(), UnivariateKind::Strip, &style, 5).unwrap();
        assert_eq!(doc.points.len(), 2 * style.sample_points);
        let slot_w = (style.width - 2.0 * style.padding * style.width) / 2.0;
        for (k, el) in doc.points.iter().enumerate() {
            let Element::Circle { cx, .. } = el else {
                panic!("non-circle");
            };
            let slot = k / style.sample_points;
            let center = style.padding * style.width + (slot as f64 + 0.5) * slot_w;
            assert!((cx - center).abs() <= 0.4 * slot_w + 1e-9);
        }
    }

    #[test]
    fn swarm_keeps_two_radii_between_centers() {
        let style = PlotStyle::default();
        let doc = render_univariate(&[standard_1d()], UnivariateKind::Swarm, &style, 3).unwrap();
        let centers: Vec<[f64; 2]> = doc
            .points
            .iter()
            .map(|el| {
                let Element::Circle { cx, cy, .. } = el else {
                    panic!("non-circle");
                };
                [*cx, *cy]
            })
            .collect();
        assert_eq!(centers.len(), style.sample_points);
        let min_gap = 2.0 * style.point_radius - 1e-9;
        for a in 0..centers.len() {
            for b in (a + 1)..centers.len() {
                let d = ((centers[a][0] - centers[b][0]).powi(2)
                    + (centers[a][1] - centers[b][1]).powi(2))
                .sqrt();
                assert!(d >= min_gap, "points {a} and {b} are {d} apart");
            }
        }
    }

    #[test]
    fn mixture_box_comes_from_draws() {
        let mixture = Distribution::mixture(
            vec![0.5, 0.5],
            vec![
                crate::distribution::MultivariateNormal::new(
                    vec![-2.0],
                    SymMatrix::from_diag(&[0.1]),
                )
                .unwrap(),
                crate::distribution::MultivariateNormal::new(
                    vec![2.0],
                    SymMatrix::from_diag(&[0.1]),
                )
                .unwrap(),
            ],
        )
        .unwrap();
        let doc =
            render_univariate(&[mixture], UnivariateKind::Box, &PlotStyle::default(), 1).unwrap();
        // Quartiles of this symmetric bimodal mixture land near ±2.
        let (d0, d1) = doc.view_box.y_data;
        assert!(d0 < -2.0 && d1 > 2.0, "range ({d0}, {d1})");
    }

    #[test]
    fn renders_are_byte_identical_per_kind() {
        let style = PlotStyle::default();
        for kind in [
            UnivariateKind::Box,
            UnivariateKind::Violin,
            UnivariateKind::Strip,
            UnivariateKind::Swarm,
        ] {
            let a = render_univariate(&pair(), kind, &style, 11).unwrap().to_svg();
            let b = render_univariate(&pair(), kind, &style, 11).unwrap().to_svg();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("box".parse::<UnivariateKind>().unwrap(), UnivariateKind::Box);
        assert_eq!("swarm".parse::<UnivariateKind>().unwrap(), UnivariateKind::Swarm);
        let err = "hexbin".parse::<UnivariateKind>().unwrap_err();
        assert!(err.to_string().contains("hexbin"));
    }

    #[test]
    fn rejects_non_1d() {
        let two = vec![Distribution::normal(vec![0.0, 0.0], SymMatrix::identity(2)).unwrap()];
        assert!(
            render_univariate(&two, UnivariateKind::Box, &PlotStyle::default(), 0).is_err()
        );
    }

    #[test]
    fn slot_labels_use_names() {
        let dists = vec![standard_1d().with_name("alpha"), standard_1d()];
        let doc =
            render_univariate(&dists, UnivariateKind::Box, &PlotStyle::default(), 0).unwrap();
        let texts: Vec<&str> = doc
            .labels
            .iter()
            .filter_map(|el| match el {
                Element::Text { content, .. } => Some(content.as_str()),
                _ => None,
            })
            .collect();
        assert!(texts.contains(&"alpha"));
        assert!(texts.contains(&"dist 1"));
    }
}
