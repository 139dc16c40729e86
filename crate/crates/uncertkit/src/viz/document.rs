//! Vector-graphic document model and its SVG serialization.
//!
//! Serialization is the determinism boundary: floats are printed with
//! exactly six significant digits, elements are emitted in a fixed layer
//! order (axes, bands, lines, points, labels), and nothing time- or
//! platform-dependent is written.

/// Horizontal text alignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    Start,
    Middle,
    End,
}

/// One drawable primitive. All coordinates are screen pixels.
#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Circle {
        cx: f64,
        cy: f64,
        r: f64,
        fill: String,
    },
    Polyline {
        points: Vec<[f64; 2]>,
        stroke: String,
        width: f64,
    },
    Polygon {
        points: Vec<[f64; 2]>,
        /// "none" leaves only the outline.
        fill: String,
        stroke: Option<String>,
        width: f64,
        opacity: Option<f64>,
    },
    /// Multi-ring region filled with the even-odd rule; rings beyond the
    /// first punch holes.
    Path {
        subpaths: Vec<Vec<[f64; 2]>>,
        fill: String,
        opacity: f64,
    },
    Text {
        x: f64,
        y: f64,
        content: String,
        anchor: Anchor,
        size: f64,
    },
}

/// The data-to-screen mapping the document was built with.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewBox {
    pub width: f64,
    pub height: f64,
    /// Data interval mapped across the padded interior, x then y. Grid
    /// views use cell indices here.
    pub x_data: (f64, f64),
    pub y_data: (f64, f64),
}

/// An ordered set of primitives plus the color legend.
///
/// Elements live in five layers serialized back-to-front in a fixed order:
/// axes, bands, lines, points, labels.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotDocument {
    pub view_box: ViewBox,
    /// (label, color) pairs written into a comment block, one per
    /// distribution in input order.
    pub legend: Vec<(String, String)>,
    pub axes: Vec<Element>,
    pub bands: Vec<Element>,
    pub lines: Vec<Element>,
    pub points: Vec<Element>,
    pub labels: Vec<Element>,
}

impl PlotDocument {
    pub(crate) fn new(view_box: ViewBox) -> Self {
        Self {
            view_box,
            legend: Vec::new(),
            axes: Vec::new(),
            bands: Vec::new(),
            lines: Vec::new(),
            points: Vec::new(),
            labels: Vec::new(),
        }
    }

    /// All elements in draw order.
    pub fn elements(&self) -> impl Iterator<Item = &Element> {
        self.axes
            .iter()
            .chain(&self.bands)
            .chain(&self.lines)
            .chain(&self.points)
            .chain(&self.labels)
    }

    /// Serialize to SVG 1.1. Byte-identical for identical documents.
    pub fn to_svg(&self) -> String {
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        out.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\" width=\"{}\" height=\"{}\">\n",
            fmt6(self.view_box.width),
            fmt6(self.view_box.height),
            fmt6(self.view_box.width),
            fmt6(self.view_box.height),
        ));
        if !self.legend.is_empty() {
            let entries: Vec<String> = self
                .legend
                .iter()
                .map(|(label, color)| format!("{}={}", comment_safe(label), color))
                .collect();
            out.push_str(&format!("<!-- colors: {} -->\n", entries.join(" ")));
        }
        for element in self.elements() {
            write_element(&mut out, element);
        }
        out.push_str("</svg>\n");
        out
    }
}

fn write_element(out: &mut String, element: &Element) {
    match element {
        Element::Circle { cx, cy, r, fill } => {
            out.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\"/>\n",
                fmt6(*cx),
                fmt6(*cy),
                fmt6(*r),
                fill
            ));
        }
        Element::Polyline {
            points,
            stroke,
            width,
        } => {
            out.push_str(&format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"/>\n",
                point_list(points),
                stroke,
                fmt6(*width)
            ));
        }
        Element::Polygon {
            points,
            fill,
            stroke,
            width,
            opacity,
        } => {
            out.push_str(&format!("<polygon points=\"{}\" fill=\"{}\"", point_list(points), fill));
            if let Some(op) = opacity {
                out.push_str(&format!(" fill-opacity=\"{}\"", fmt6(*op)));
            }
            match stroke {
                Some(stroke) => out.push_str(&format!(
                    " stroke=\"{}\" stroke-width=\"{}\"/>\n",
                    stroke,
                    fmt6(*width)
                )),
                None => out.push_str("/>\n"),
            }
        }
        Element::Path {
            subpaths,
            fill,
            opacity,
        } => {
            let mut d = String::new();
            for ring in subpaths {
                if ring.is_empty() {
                    continue;
                }
                for (i, p) in ring.iter().enumerate() {
                    let cmd = if i == 0 { 'M' } else { 'L' };
                    d.push_str(&format!("{}{} {} ", cmd, fmt6(p[0]), fmt6(p[1])));
                }
                d.push_str("Z ");
            }
            out.push_str(&format!(
                "<path d=\"{}\" fill=\"{}\" fill-rule=\"evenodd\" fill-opacity=\"{}\"/>\n",
                d.trim_end(),
                fill,
                fmt6(*opacity)
            ));
        }
        Element::Text {
            x,
            y,
            content,
            anchor,
            size,
        } => {
            let anchor = match anchor {
                Anchor::Start => "start",
                Anchor::Middle => "middle",
                Anchor::End => "end",
            };
            out.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" text-anchor=\"{}\" font-family=\"sans-serif\" font-size=\"{}\">{}</text>\n",
                fmt6(*x),
                fmt6(*y),
                anchor,
                fmt6(*size),
                escape_text(content)
            ));
        }
    }
}

fn point_list(points: &[[f64; 2]]) -> String {
    points
        .iter()
        .map(|p| format!("{},{}", fmt6(p[0]), fmt6(p[1])))
        .collect::<Vec<_>>()
        .join(" ")
}

fn escape_text(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// XML comments may not contain "--" or end with "-".
fn comment_safe(s: &str) -> String {
    let mut out = s.replace("--", "- -");
    while out.contains("--") {
        out = out.replace("--", "- -");
    }
    if out.ends_with('-') {
        out.push(' ');
    }
    out
}

/// Plain-decimal rendering with exactly six significant digits.
pub(crate) fn fmt6(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    debug_assert!(v.is_finite(), "non-finite coordinate {v}");
    let sci = format!("{:.5e}", v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific float format");
    let exp: i32 = exp.parse().expect("float exponent");
    let neg = mantissa.starts_with('-');
    let digits: Vec<u8> = mantissa.bytes().filter(|b| b.is_ascii_digit()).collect();
    // Number of digits left of the decimal point.
    let point = exp + 1;
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        for _ in 0..(-point) {
            out.push('0');
        }
        out.push_str(std::str::from_utf8(&digits).expect("ascii digits"));
    } else if (point as usize) < digits.len() {
        out.push_str(std::str::from_utf8(&digits[..point as usize]).expect("ascii digits"));
        out.push('.');
        out.push_str(std::str::from_utf8(&digits[point as usize..]).expect("ascii digits"));
    } else {
        out.push_str(std::str::from_utf8(&digits).expect("ascii digits"));
        for _ in 0..(point as usize - digits.len()) {
            out.push('0');
        }
    }
    out
}
