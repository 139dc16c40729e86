//! Linear data-to-screen scales, nice-number ticks, and axis drawing.

use super::document::{Anchor, Element, PlotDocument};

/// Linear map from a data interval onto a screen interval. A degenerate
/// data interval is widened to half a unit on each side so every value maps
/// to the screen center instead of dividing by zero.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LinScale {
    pub d0: f64,
    pub d1: f64,
    pub s0: f64,
    pub s1: f64,
}

impl LinScale {
    pub fn new(mut d0: f64, mut d1: f64, s0: f64, s1: f64) -> Self {
        if !(d1 > d0) {
            let c = d0;
            d0 = c - 0.5;
            d1 = c + 0.5;
        }
        Self { d0, d1, s0, s1 }
    }

    pub fn map(&self, v: f64) -> f64 {
        self.s0 + (v - self.d0) / (self.d1 - self.d0) * (self.s1 - self.s0)
    }
}

/// Screen rectangle in pixels; y grows downward.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    /// The interior of a style-sized canvas after fractional padding.
    pub fn padded(width: f64, height: f64, padding: f64) -> Self {
        Self {
            x0: padding * width,
            y0: padding * height,
            x1: width - padding * width,
            y1: height - padding * height,
        }
    }

    /// Shrink by a fraction of the shorter side on every edge.
    pub fn inset(&self, fraction: f64) -> Self {
        let m = fraction * (self.x1 - self.x0).min(self.y1 - self.y0);
        Self {
            x0: self.x0 + m,
            y0: self.y0 + m,
            x1: self.x1 - m,
            y1: self.y1 - m,
        }
    }
}

/// Paired scales mapping a data rectangle onto a screen rectangle with the
/// y axis flipped (data up = screen up).
#[derive(Debug, Clone, Copy)]
pub(crate) struct Frame {
    pub x: LinScale,
    pub y: LinScale,
}

impl Frame {
    pub fn new(x_range: (f64, f64), y_range: (f64, f64), rect: Rect) -> Self {
        Self {
            x: LinScale::new(x_range.0, x_range.1, rect.x0, rect.x1),
            y: LinScale::new(y_range.0, y_range.1, rect.y1, rect.y0),
        }
    }

    pub fn map(&self, p: [f64; 2]) -> [f64; 2] {
        [self.x.map(p[0]), self.y.map(p[1])]
    }

    /// The data ranges actually in effect (after degenerate widening).
    pub fn x_data(&self) -> (f64, f64) {
        (self.x.d0, self.x.d1)
    }

    pub fn y_data(&self) -> (f64, f64) {
        (self.y.d0, self.y.d1)
    }
}

/// Tick positions by the 1-2-5 rule, aiming for about five per axis.
pub(crate) fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
        return Vec::new();
    }
    let raw = (hi - lo) / 4.0;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let step = mag
        * if norm < 1.5 {
            1.0
        } else if norm < 3.5 {
            2.0
        } else if norm < 7.5 {
            5.0
        } else {
            10.0
        };
    let k0 = (lo / step - 1e-9).ceil() as i64;
    let k1 = (hi / step + 1e-9).floor() as i64;
    (k0..=k1).map(|k| k as f64 * step).collect()
}

/// Label a tick value with just enough decimals for its step.
pub(crate) fn fmt_tick(v: f64, step: f64) -> String {
    let decimals = if step >= 1.0 {
        0
    } else {
        (-step.log10().floor() as i32).clamp(0, 9) as usize
    };
    let s = format!("{:.*}", decimals, v);
    // A value rounding to zero must not keep its sign.
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

pub(crate) const AXIS_COLOR: &str = "#333333";
pub(crate) const TICK_LEN: f64 = 4.0;
pub(crate) const TICK_FONT: f64 = 10.0;

/// Bottom and left axis lines with ticks and numeric labels.
pub(crate) fn draw_axes(doc: &mut PlotDocument, frame: &Frame, stroke_width: f64) {
    draw_x_axis(doc, frame, stroke_width, true);
    draw_y_axis(doc, frame, stroke_width);
}

/// Bottom axis line, optionally with numeric ticks (categorical views label
/// slots themselves).
pub(crate) fn draw_x_axis(doc: &mut PlotDocument, frame: &Frame, stroke_width: f64, ticks: bool) {
    let (x0, x1) = (frame.x.s0, frame.x.s1);
    let yb = frame.y.s0;
    doc.axes.push(Element::Polyline {
        points: vec![[x0, yb], [x1, yb]],
        stroke: AXIS_COLOR.to_string(),
        width: stroke_width,
    });
    if !ticks {
        return;
    }
    let xt = nice_ticks(frame.x.d0, frame.x.d1);
    if let Some(step) = tick_step(&xt) {
        for &t in &xt {
            let sx = frame.x.map(t);
            doc.axes.push(Element::Polyline {
                points: vec![[sx, yb], [sx, yb + TICK_LEN]],
                stroke: AXIS_COLOR.to_string(),
                width: stroke_width,
            });
            doc.labels.push(Element::Text {
                x: sx,
                y: yb + TICK_LEN + TICK_FONT,
                content: fmt_tick(t, step),
                anchor: Anchor::Middle,
                size: TICK_FONT,
            });
        }
    }
}

/// Left axis line with ticks and labels.
pub(crate) fn draw_y_axis(doc: &mut PlotDocument, frame: &Frame, stroke_width: f64) {
    let x0 = frame.x.s0;
    let (yb, yt) = (frame.y.s0, frame.y.s1);
    doc.axes.push(Element::Polyline {
        points: vec![[x0, yb], [x0, yt]],
        stroke: AXIS_COLOR.to_string(),
        width: stroke_width,
    });
    let yticks = nice_ticks(frame.y.d0, frame.y.d1);
    if let Some(step) = tick_step(&yticks) {
        for &t in &yticks {
            let sy = frame.y.map(t);
            doc.axes.push(Element::Polyline {
                points: vec![[x0 - TICK_LEN, sy], [x0, sy]],
                stroke: AXIS_COLOR.to_string(),
                width: stroke_width,
            });
            doc.labels.push(Element::Text {
                x: x0 - TICK_LEN - 2.0,
                y: sy + TICK_FONT * 0.35,
                content: fmt_tick(t, step),
                anchor: Anchor::End,
                size: TICK_FONT,
            });
        }
    }
}

pub(crate) fn tick_step(ticks: &[f64]) -> Option<f64> {
    if ticks.len() >= 2 {
        Some(ticks[1] - ticks[0])
    } else if ticks.len() == 1 {
        Some(ticks[0].abs().max(1.0))
    } else {
        None
    }
}
