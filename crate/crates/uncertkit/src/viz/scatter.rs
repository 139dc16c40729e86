//! Sample-based scatter view for 2D distributions.

use crate::distribution::Distribution;
use crate::error::Result;
use crate::viz::document::{Element, PlotDocument, ViewBox};
use crate::viz::scale::{draw_axes, Frame, Rect};
use crate::viz::{color, label, require_dim, validate_style, PlotStyle};

/// Draw `samples_per` seeded samples from every 2D distribution as colored
/// points on shared axes. Distribution `i` draws with seed `seed + i` and
/// fills with palette color `i`.
pub fn render_scatter(
    dists: &[Distribution],
    samples_per: usize,
    seed: u64,
    style: &PlotStyle,
) -> Result<PlotDocument> {
    validate_style(style)?;
    require_dim(dists, 2)?;

    let samples: Vec<_> = dists
        .iter()
        .enumerate()
        .map(|(i, dist)| dist.sample(samples_per, seed.wrapping_add(i as u64)))
        .collect();

    let mut x = (f64::INFINITY, f64::NEG_INFINITY);
    let mut y = (f64::INFINITY, f64::NEG_INFINITY);
    for mat in &samples {
        for r in 0..mat.rows() {
            x = (x.0.min(mat.get(r, 0)), x.1.max(mat.get(r, 0)));
            y = (y.0.min(mat.get(r, 1)), y.1.max(mat.get(r, 1)));
        }
    }
    if samples_per == 0 {
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

    for (i, (dist, mat)) in dists.iter().zip(&samples).enumerate() {
        let fill = color(style, i).to_string();
        doc.legend.push((label(dist, i), fill.clone()));
        for r in 0..mat.rows() {
            let p = frame.map([mat.get(r, 0), mat.get(r, 1)]);
            doc.points.push(Element::Circle {
                cx: p[0],
                cy: p[1],
                r: style.point_radius,
                fill: fill.clone(),
            });
        }
    }

    Ok(doc)
}
