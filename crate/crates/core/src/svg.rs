//! SVG drawings of Newton polygons.
//!
//! Support points are grey dots, hull vertices black, edges blue with their
//! slope written at the midpoint. Output depends only on the input, so the
//! same polynomial always yields the same bytes.

use std::fmt::Write;

use num_traits::ToPrimitive;

use crate::poly::PuiseuxPoly;
use crate::polygon::{support, NewtonPolygon, SupportPoint};

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 48.0;

struct Frame {
    sx: f64,
    sy: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        MARGIN + v * self.sx
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN - v * self.sy
    }

    fn point(&self, p: &SupportPoint) -> (f64, f64) {
        (self.x(p.x.to_f64().unwrap_or(0.0)), self.y(p.y as f64))
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Render the support of f and, when given, its Newton polygon.
pub fn polygon_svg(f: &PuiseuxPoly, polygon: Option<&NewtonPolygon>, title: &str) -> String {
    let pts = support(f);
    let max_x = pts
        .iter()
        .map(|p| p.x.to_f64().unwrap_or(0.0))
        .fold(1.0f64, f64::max)
        .ceil();
    let max_y = pts.iter().map(|p| p.y).max().unwrap_or(1).max(1) as f64;
    let frame = Frame {
        sx: (WIDTH - 2.0 * MARGIN) / max_x,
        sy: (HEIGHT - 2.0 * MARGIN) / max_y,
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="20" font-size="13">{}</text>"#,
        MARGIN,
        escape(title)
    );
    // axes and integer ticks
    let (ox, oy) = (frame.x(0.0), frame.y(0.0));
    let _ = writeln!(
        s,
        r#"<line x1="{ox:.2}" y1="{oy:.2}" x2="{:.2}" y2="{oy:.2}" stroke="black"/>"#,
        frame.x(max_x)
    );
    let _ = writeln!(
        s,
        r#"<line x1="{ox:.2}" y1="{oy:.2}" x2="{ox:.2}" y2="{:.2}" stroke="black"/>"#,
        frame.y(max_y)
    );
    let step_x = (max_x / 12.0).ceil().max(1.0) as usize;
    for i in (0..=max_x as usize).step_by(step_x) {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{i}</text>"#,
            frame.x(i as f64),
            oy + 16.0
        );
    }
    for j in 0..=max_y as usize {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{j}</text>"#,
            ox - 8.0,
            frame.y(j as f64) + 4.0
        );
    }
    if let Some(np) = polygon {
        for e in np.edges.iter().filter(|e| !e.is_virtual) {
            let (x1, y1) = frame.point(&e.start);
            let (x2, y2) = frame.point(&e.end);
            let _ = writeln!(
                s,
                r##"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#1f5fbf" stroke-width="2"/>"##
            );
            let _ = writeln!(
                s,
                r##"<text x="{:.2}" y="{:.2}" fill="#1f5fbf">slope {}</text>"##,
                (x1 + x2) / 2.0 + 6.0,
                (y1 + y2) / 2.0 - 6.0,
                e.slope
            );
        }
    }
    let is_vertex = |p: &SupportPoint| polygon.is_some_and(|np| np.vertices.contains(p));
    for p in &pts {
        let (cx, cy) = frame.point(p);
        let fill = if is_vertex(p) { "black" } else { "#888888" };
        let _ = writeln!(
            s,
            r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="4" fill="{fill}"><title>{p}</title></circle>"#
        );
    }
    s.push_str("</svg>\n");
    s
}
