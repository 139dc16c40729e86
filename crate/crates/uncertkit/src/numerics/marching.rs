//! Marching-squares contour extraction on a regular grid.
//!
//! Cells are scanned row-major and each of the 16 corner sign patterns
//! emits zero, one, or two segments with endpoints linearly interpolated
//! along cell edges. The two ambiguous saddle patterns are resolved by the
//! cell-center average, the standard deterministic rule. Segments are then
//! chained into polylines by matching shared edge identifiers, never by
//! comparing floating-point coordinates, so the output order is a pure
//! function of the input grid.

use std::collections::HashMap;

use crate::numerics::matrix::Mat;

/// Contour path in grid coordinates (x = column, y = row).
///
/// Closed loops set `closed` and do not repeat the first point.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<[f64; 2]>,
    pub closed: bool,
}

/// An undirected cell edge, identified by orientation and the grid node at
/// its lower-index end. Edge identity is what welds segments from adjacent
/// cells together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum EdgeId {
    Horizontal(usize, usize),
    Vertical(usize, usize),
}

struct Segment {
    a: EdgeId,
    b: EdgeId,
    pa: [f64; 2],
    pb: [f64; 2],
}

/// Extract the `level` isolines of a scalar field sampled on a regular
/// grid. A point is inside the contour when its value exceeds `level`.
/// Grids smaller than 2×2, a non-finite level, or a level outside the data
/// range all yield an empty set.
pub fn marching_squares(values: &Mat, level: f64) -> Vec<Polyline> {
    if values.rows() < 2 || values.cols() < 2 || !level.is_finite() {
        return Vec::new();
    }

    let mut segments: Vec<Segment> = Vec::new();
    for r in 0..values.rows() - 1 {
        for c in 0..values.cols() - 1 {
            emit_cell(values, level, r, c, &mut segments);
        }
    }

    chain(segments)
}

fn emit_cell(values: &Mat, level: f64, r: usize, c: usize, out: &mut Vec<Segment>) {
    let va = values.get(r, c);
    let vb = values.get(r, c + 1);
    let vc = values.get(r + 1, c + 1);
    let vd = values.get(r + 1, c);

    let mut case = 0u8;
    if va > level {
        case |= 1;
    }
    if vb > level {
        case |= 2;
    }
    if vc > level {
        case |= 4;
    }
    if vd > level {
        case |= 8;
    }
    if case == 0 || case == 15 {
        return;
    }

    let top = EdgeId::Horizontal(r, c);
    let bottom = EdgeId::Horizontal(r + 1, c);
    let left = EdgeId::Vertical(r, c);
    let right = EdgeId::Vertical(r, c + 1);

    let cross = |edge: EdgeId| -> [f64; 2] {
        match edge {
            EdgeId::Horizontal(er, ec) => {
                let v0 = values.get(er, ec);
                let v1 = values.get(er, ec + 1);
                let t = (level - v0) / (v1 - v0);
                [ec as f64 + t, er as f64]
            }
            EdgeId::Vertical(er, ec) => {
                let v0 = values.get(er, ec);
                let v1 = values.get(er + 1, ec);
                let t = (level - v0) / (v1 - v0);
                [ec as f64, er as f64 + t]
            }
        }
    };

    let mut push = |ea: EdgeId, eb: EdgeId| {
        let pa = cross(ea);
        let pb = cross(eb);
        if pa != pb {
            out.push(Segment { a: ea, b: eb, pa, pb });
        }
    };

    match case {
        1 => push(left, top),
        2 => push(top, right),
        3 => push(left, right),
        4 => push(right, bottom),
        5 => {
            // Saddle: corners a and c inside. The cell-center average
            // decides whether they form one band or two islands.
            if 0.25 * (va + vb + vc + vd) > level {
                push(top, right);
                push(left, bottom);
            } else {
                push(left, top);
                push(right, bottom);
            }
        }
        6 => push(top, bottom),
        7 => push(left, bottom),
        8 => push(bottom, left),
        9 => push(top, bottom),
        10 => {
            // Saddle: corners b and d inside.
            if 0.25 * (va + vb + vc + vd) > level {
                push(top, left);
                push(right, bottom);
            } else {
                push(top, right);
                push(left, bottom);
            }
        }
        11 => push(right, bottom),
        12 => push(left, right),
        13 => push(top, right),
        14 => push(top, left),
        _ => unreachable!(),
    }
}

/// Weld segments that share an edge into polylines. Every edge carries at
/// most one crossing and touches at most two cells, so edge degree is at
/// most two and chains are simple paths or loops. Chains start at the
/// lowest-index unused segment, which fixes the output order.
fn chain(segments: Vec<Segment>) -> Vec<Polyline> {
    let mut by_edge: HashMap<EdgeId, Vec<usize>> = HashMap::new();
    for (i, s) in segments.iter().enumerate() {
        by_edge.entry(s.a).or_default().push(i);
        by_edge.entry(s.b).or_default().push(i);
    }

    let mut used = vec![false; segments.len()];
    let mut polylines = Vec::new();

    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let s = &segments[start];
        let mut points = vec![s.pa, s.pb];
        let start_edge = s.a;
        let mut closed = false;

        // Walk forward from the far end.
        let mut cursor = s.b;
        loop {
            if cursor == start_edge {
                closed = true;
                points.pop();
                break;
            }
            let Some(next) = next_segment(&by_edge, &used, cursor) else {
                break;
            };
            used[next] = true;
            let seg = &segments[next];
            cursor = if seg.a == cursor { seg.b } else { seg.a };
            points.push(if seg.a == cursor { seg.pa } else { seg.pb });
        }

        // Walk backward from the near end and prepend.
        if !closed {
            let mut cursor = start_edge;
            let mut head: Vec<[f64; 2]> = Vec::new();
            while let Some(next) = next_segment(&by_edge, &used, cursor) {
                used[next] = true;
                let seg = &segments[next];
                cursor = if seg.a == cursor { seg.b } else { seg.a };
                head.push(if seg.a == cursor { seg.pa } else { seg.pb });
            }
            if !head.is_empty() {
                head.reverse();
                head.extend(points);
                points = head;
            }
        }

        polylines.push(Polyline { points, closed });
    }

    polylines
}

fn next_segment(by_edge: &HashMap<EdgeId, Vec<usize>>, used: &[bool], edge: EdgeId) -> Option<usize> {
    by_edge
        .get(&edge)?
        .iter()
        .copied()
        .find(|&i| !used[i])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(rows: &[Vec<f64>]) -> Mat {
        Mat::from_rows(rows)
    }

    #[test]
    fn single_corner_cell() {
        let g = grid(&[vec![0.0, 0.0], vec![0.0, 2.0]]);
        let polys = marching_squares(&g, 1.0);
        assert_eq!(polys.len(), 1);
        assert!(!polys[0].closed);
        assert_eq!(polys[0].points, vec![[1.0, 0.5], [0.5, 1.0]]);
    }

    #[test]
    fn level_outside_range_is_empty() {
        let g = grid(&[vec![0.0, 0.0], vec![0.0, 0.5]]);
        assert!(marching_squares(&g, 1.0).is_empty());
        // All values above the level: no boundary either.
        assert!(marching_squares(&g, -1.0).is_empty());
    }

    #[test]
    fn degenerate_grids_are_empty() {
        let g = grid(&[vec![0.0, 2.0]]);
        assert!(marching_squares(&g, 1.0).is_empty());
        let g = grid(&[vec![0.0], vec![2.0]]);
        assert!(marching_squares(&g, 1.0).is_empty());
        let g2 = grid(&[vec![0.0, 0.0], vec![0.0, 2.0]]);
        assert!(marching_squares(&g2, f64::NAN).is_empty());
    }

    #[test]
    fn diamond_forms_one_closed_loop() {
        let g = grid(&[
            vec![0.0, 0.0, 0.0],
            vec![0.0, 2.0, 0.0],
            vec![0.0, 0.0, 0.0],
        ]);
        let polys = marching_squares(&g, 1.0);
        assert_eq!(polys.len(), 1);
        assert!(polys[0].closed);
        assert_eq!(polys[0].points.len(), 4);
        // Vertices are the four edge midpoints around the center node.
        for p in &polys[0].points {
            let d = (p[0] - 1.0).abs() + (p[1] - 1.0).abs();
            assert!((d - 0.5).abs() < 1e-15, "vertex {p:?}");
        }
    }

    #[test]
    fn saddle_center_outside_splits_islands() {
        let g = grid(&[vec![0.0, 2.0], vec![2.0, 0.0]]);
        // Center average 1.0, not above level: two separate corners.
        let polys = marching_squares(&g, 1.0);
        assert_eq!(polys.len(), 2);
        assert!(polys.iter().all(|p| !p.closed));
        assert!(polys.iter().all(|p| p.points.len() == 2));
    }

    #[test]
    fn saddle_pairing_follows_center_average() {
        let g = grid(&[vec![2.0, 0.0], vec![0.0, 2.0]]);
        // Center average is 1.0. Below its level the two inside corners
        // form a band: the top crossing pairs with the right edge.
        let band = marching_squares(&g, 0.9);
        assert_eq!(band.len(), 2);
        let top_mate = band
            .iter()
            .find(|p| p.points.iter().any(|q| q[1] == 0.0))
            .expect("one polyline touches the top edge");
        assert!(top_mate.points.iter().any(|q| q[0] == 1.0));

        // Above the center average the corners separate into islands: the
        // top crossing pairs with the left edge instead.
        let islands = marching_squares(&g, 1.1);
        assert_eq!(islands.len(), 2);
        let top_mate = islands
            .iter()
            .find(|p| p.points.iter().any(|q| q[1] == 0.0))
            .expect("one polyline touches the top edge");
        assert!(top_mate.points.iter().any(|q| q[0] == 0.0));
    }

    #[test]
    fn vertices_stay_on_cell_edges() {
        let g = grid(&[
            vec![0.3, 1.2, 0.1, 0.9],
            vec![1.1, 0.2, 1.4, 0.4],
            vec![0.5, 1.3, 0.6, 1.0],
        ]);
        for poly in marching_squares(&g, 0.75) {
            for p in &poly.points {
                let on_x = (p[0] - p[0].round()).abs() < 1e-12;
                let on_y = (p[1] - p[1].round()).abs() < 1e-12;
                assert!(
                    on_x || on_y,
                    "vertex {p:?} is not on a grid line"
                );
            }
        }
    }

    #[test]
    fn circle_field_traces_unit_circle() {
        let n = 256;
        let world = |i: usize| -2.0 + 4.0 * i as f64 / (n - 1) as f64;
        let g = Mat::from_fn(n, n, |r, c| {
            let x = world(c);
            let y = world(r);
            x * x + y * y
        });
        // Inside convention is v > level, so the contour encloses the
        // exterior of the disk; the traced curve is still the unit circle.
        let polys = marching_squares(&g, 1.0);
        assert_eq!(polys.len(), 1);
        assert!(polys[0].closed);
        let spacing = 4.0 / (n - 1) as f64;
        for p in &polys[0].points {
            let x = world(0) + p[0] * spacing;
            let y = world(0) + p[1] * spacing;
            let radius = (x * x + y * y).sqrt();
            assert!(
                (radius - 1.0).abs() <= 2.0 * spacing,
                "vertex radius {radius}"
            );
        }
        assert!(polys[0].points.len() > 100);
    }

    #[test]
    fn deterministic_output() {
        let g = grid(&[
            vec![0.3, 1.2, 0.1, 0.9],
            vec![1.1, 0.2, 1.4, 0.4],
            vec![0.5, 1.3, 0.6, 1.0],
        ]);
        let a = marching_squares(&g, 0.75);
        let b = marching_squares(&g, 0.75);
        assert_eq!(a, b);
    }
}
