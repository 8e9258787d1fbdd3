//! SVG figures: domain outline, Cheeger set filled light gray, free arcs
//! stroked. Coordinates are y-up; arcs are emitted as exact SVG arcs.

use std::f64::consts::PI;
use std::fmt::Write;

use crate::geometry::{ArcPolygon, Edge, Point};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SvgOptions {
    /// Pixels per length unit.
    pub scale: f64,
    /// Margin in pixels.
    pub margin: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions { scale: 128.0, margin: 16.0 }
    }
}

struct Frame {
    lo: Point,
    hi: Point,
    opts: SvgOptions,
}

impl Frame {
    fn map(&self, p: Point) -> (f64, f64) {
        let s = self.opts.scale;
        ((p.x - self.lo.x) * s + self.opts.margin, (self.hi.y - p.y) * s + self.opts.margin)
    }

    fn size(&self) -> (f64, f64) {
        let s = self.opts.scale;
        let m = 2.0 * self.opts.margin;
        ((self.hi.x - self.lo.x) * s + m, (self.hi.y - self.lo.y) * s + m)
    }

    /// Path commands for one edge, starting at its start point.
    fn edge(&self, e: &Edge, out: &mut String) {
        match *e {
            Edge::Segment { end, .. } => {
                let (x, y) = self.map(end);
                let _ = write!(out, " L{x:.4} {y:.4}");
            }
            Edge::Arc { radius, span, .. } => {
                // Split so no piece reaches a full turn.
                let pieces = if span.abs() > PI { 2 } else { 1 };
                let len = e.length();
                let r = radius * self.opts.scale;
                // The y flip turns counterclockwise arcs into negative-angle
                // SVG arcs.
                let sweep = if span > 0.0 { 0 } else { 1 };
                for k in 1..=pieces {
                    let (x, y) = self.map(e.frame(len * k as f64 / pieces as f64).0);
                    let _ = write!(out, " A{r:.4} {r:.4} 0 0 {sweep} {x:.4} {y:.4}");
                }
            }
        }
    }

    fn loop_path(&self, edges: &[Edge], out: &mut String) {
        let (x, y) = self.map(edges[0].start());
        let _ = write!(out, "M{x:.4} {y:.4}");
        for e in edges {
            self.edge(e, out);
        }
        out.push_str(" Z ");
    }

    fn shape_path(&self, shape: &ArcPolygon) -> String {
        let mut d = String::new();
        for l in shape.loops() {
            self.loop_path(l, &mut d);
        }
        d.trim_end().to_string()
    }
}

/// SVG document with the domain outline and, when given, the Cheeger set.
pub fn render_svg(domain: &ArcPolygon, set: Option<&ArcPolygon>, opts: SvgOptions) -> String {
    let (lo, hi) = domain.bbox();
    let frame = Frame { lo, hi, opts };
    let (w, h) = frame.size();
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.1}" height="{h:.1}" viewBox="0 0 {w:.4} {h:.4}">"#
    );
    if let Some(set) = set {
        let _ = writeln!(
            svg,
            r##"  <path class="cheeger-set" d="{}" fill="#d9d9d9" fill-rule="evenodd" stroke="none"/>"##,
            frame.shape_path(set)
        );
        let mut arcs = String::new();
        for e in set.all_edges().filter(|e| e.is_free()) {
            let (x, y) = frame.map(e.start());
            let _ = write!(arcs, "M{x:.4} {y:.4}");
            frame.edge(e, &mut arcs);
            arcs.push(' ');
        }
        if !arcs.is_empty() {
            let _ = writeln!(
                svg,
                r##"  <path class="free-boundary" d="{}" fill="none" stroke="#555555" stroke-width="1.5"/>"##,
                arcs.trim_end()
            );
        }
    }
    let _ = writeln!(
        svg,
        r##"  <path class="domain" d="{}" fill="none" stroke="#222222" stroke-width="2"/>"##,
        frame.shape_path(domain)
    );
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::rectangle_h;
    use crate::ConvexPolygon;

    #[test]
    fn one_filled_path() {
        let dom = ConvexPolygon::rectangle(1.0, 3.0).unwrap().to_arcpolygon();
        let res = rectangle_h(1.0, 3.0).unwrap();
        let svg = render_svg(&dom, res.cheeger_set.as_ref(), SvgOptions::default());
        assert_eq!(svg.matches("fill=\"#d9d9d9\"").count(), 1);
        assert_eq!(svg.matches(" A").count(), 8);
        let bare = render_svg(&dom, None, SvgOptions::default());
        assert_eq!(bare.matches("fill=\"#d9d9d9\"").count(), 0);
        assert!(bare.starts_with("<svg") && bare.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn y_axis_points_up() {
        let dom = ConvexPolygon::rectangle(1.0, 1.0).unwrap().to_arcpolygon();
        let f = Frame { lo: dom.bbox().0, hi: dom.bbox().1, opts: SvgOptions::default() };
        assert!(f.map(Point::new(0.0, 1.0)).1 < f.map(Point::new(0.0, -1.0)).1);
    }
}
