//! SVG drawings of a table with an orbit, plain or unfolded into stacked copies.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::report::num;
use crate::geometry::{ArcId, PhasePoint, Table, Vec2};

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 20.0;

struct Layer {
    points: Vec<Vec2>,
    style: &'static str,
}

const TRACKED: &str = "fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"";
const UNTRACKED: &str = "fill=\"none\" stroke=\"grey\" stroke-width=\"1\" stroke-dasharray=\"4 3\"";
const ORBIT: &str = "fill=\"none\" stroke=\"crimson\" stroke-width=\"1\"";

fn render(layers: &[Layer], labels: &[(Vec2, String)]) -> String {
    let all = layers.iter().flat_map(|l| l.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in all {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    let scale = (WIDTH - 2.0 * MARGIN) / (x1 - x0).max(1e-9);
    let height = (y1 - y0) * scale + 2.0 * MARGIN;
    let map = |p: Vec2| (MARGIN + (p.x - x0) * scale, MARGIN + (y1 - p.y) * scale);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        num(WIDTH),
        num(height),
        num(WIDTH),
        num(height)
    );
    for layer in layers {
        let pts: Vec<String> = layer
            .points
            .iter()
            .map(|&p| {
                let (x, y) = map(p);
                format!("{:.2},{:.2}", x, y)
            })
            .collect();
        let _ = writeln!(s, "<polyline {} points=\"{}\"/>", layer.style, pts.join(" "));
    }
    for (p, text) in labels {
        let (x, y) = map(*p);
        let _ = writeln!(s, "<text x=\"{x:.2}\" y=\"{y:.2}\" font-size=\"10\">{text}</text>");
    }
    s.push_str("</svg>\n");
    s
}

fn boundary(table: &Table, place: impl Fn(Vec2) -> Vec2) -> Vec<Layer> {
    let mut layers: Vec<Layer> = table
        .arcs()
        .iter()
        .map(|&a| Layer { points: table.curve(a).polyline(8).into_iter().map(&place).collect(), style: TRACKED })
        .collect();
    layers.extend(
        table
            .untracked()
            .iter()
            .map(|c| Layer { points: c.polyline(8).into_iter().map(&place).collect(), style: UNTRACKED }),
    );
    layers
}

/// Table outline with the orbit as a polyline through its collision points.
pub fn orbit_svg(table: &Table, orbit: &[PhasePoint]) -> String {
    let mut layers = boundary(table, |p| p);
    layers.push(Layer { points: orbit.iter().map(|p| table.point(p.arc, p.r)).collect(), style: ORBIT });
    render(&layers, &[])
}

/// Collision points in the unfolded plane and the copies `(m, flipped)` they visit.
fn unfolded_path(table: &Table, orbit: &[PhasePoint]) -> (Vec<Vec2>, BTreeSet<(i64, bool)>) {
    let (mut m, mut flipped) = (0i64, false);
    let mut copies = BTreeSet::new();
    let mut path = Vec::with_capacity(orbit.len());
    for p in orbit {
        copies.insert((m, flipped));
        path.push(place(table, m, flipped, table.point(p.arc, p.r)));
        let even = m.rem_euclid(2) == 0;
        match p.arc {
            ArcId::Top => m += if even { 1 } else { -1 },
            ArcId::Bottom => m += if even { -1 } else { 1 },
            ArcId::Flat => flipped = !flipped,
            _ => {}
        }
    }
    (path, copies)
}

fn place(table: &Table, m: i64, flipped: bool, p: Vec2) -> Vec2 {
    let axis = table.mirror_axis().unwrap_or(0.0);
    let x = if flipped { 2.0 * axis - p.x } else { p.x };
    let y = if m.rem_euclid(2) == 0 { m as f64 + p.y } else { (m + 1) as f64 - p.y };
    Vec2::new(x, y)
}

/// Orbit unfolded across the walls (and the flat cap of a semistadium).
///
/// Each wall reflection moves the drawing into the neighbouring mirrored copy of the
/// strip, so every cap-to-cap passage becomes a straight segment. Copy `m` occupies
/// `m <= y <= m + 1`; its label is the copy index.
pub fn unfolded_svg(table: &Table, orbit: &[PhasePoint]) -> String {
    let (path, copies) = unfolded_path(table, orbit);
    let mut layers = Vec::new();
    let mut labels = Vec::new();
    for &(cm, cf) in &copies {
        layers.extend(boundary(table, |p| place(table, cm, cf, p)));
        if !cf {
            let w = table.walls();
            labels.push((Vec2::new(0.5 * (w.x_min + w.x_max), cm as f64 + 0.5), format!("{cm}")));
        }
    }
    layers.push(Layer { points: path, style: ORBIT });
    render(&layers, &labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::SymbolWord;
    use crate::geometry::make_stadium;

    fn realized(t: &Table, word: &[i32]) -> Vec<PhasePoint> {
        let w = SymbolWord::new(word.to_vec(), 2).unwrap();
        crate::shooting::realize_word(t, &w, t.eps()).unwrap().orbit
    }

    #[test]
    fn unfolded_passages_are_straight() {
        let t = make_stadium(4.0, 1.0).unwrap();
        let orbit = realized(&t, &[0, 1, 0, -1, 0, 1, 0]);
        let (path, copies) = unfolded_path(&t, &orbit);
        assert!(copies.len() > 1);
        // points of one cap-to-cap passage are collinear
        let mut start = 0;
        for i in 1..orbit.len() {
            if orbit[i].arc.is_wall() {
                continue;
            }
            let (a, b) = (path[start], path[i]);
            for p in &path[start + 1..i] {
                assert!((b - a).cross(*p - a).abs() < 1e-9 * (b - a).norm());
            }
            start = i;
        }
        let svg = unfolded_svg(&t, &orbit);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert_eq!(svg, unfolded_svg(&t, &orbit));
    }

    #[test]
    fn semistadium_unfolds_through_flat_cap() {
        let t = crate::geometry::make_mushroom(3.0, 0.5).unwrap();
        let orbit = realized(&t, &[0, 1, 0, 0]);
        assert!(orbit.iter().any(|p| p.arc == ArcId::Flat));
        let (path, copies) = unfolded_path(&t, &orbit);
        assert!(copies.iter().any(|c| c.1));
        let mut start = 0;
        for i in 1..orbit.len() {
            if orbit[i].arc.is_wall() || orbit[i].arc == ArcId::Flat {
                continue;
            }
            let (a, b) = (path[start], path[i]);
            for p in &path[start + 1..i] {
                assert!((b - a).cross(*p - a).abs() < 1e-9 * (b - a).norm());
            }
            start = i;
        }
    }
}
