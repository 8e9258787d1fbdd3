//! Closed boundaries made of line segments and circular arcs.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use super::point::{rings_contain, segments_intersect, Point};
use crate::error::{invalid, Error, Result};

fn is_false(b: &bool) -> bool {
    !*b
}

/// One boundary edge. Arcs carry a signed span in radians
/// (positive = counterclockwise), normalized to `(-2π, 2π]`; a full circle
/// has span exactly `2π` (or `-2π` when traversed clockwise as a hole).
///
/// `free` marks edges that are not part of the domain boundary: the
/// radius-r arcs created when an opening rounds a corner.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Edge {
    Segment {
        start: Point,
        end: Point,
        #[serde(default, skip_serializing_if = "is_false")]
        free: bool,
    },
    Arc {
        center: Point,
        radius: f64,
        start_angle: f64,
        span: f64,
        #[serde(default, skip_serializing_if = "is_false")]
        free: bool,
    },
}

impl Edge {
    pub fn segment(start: Point, end: Point) -> Edge {
        Edge::Segment { start, end, free: false }
    }

    pub fn arc(center: Point, radius: f64, start_angle: f64, span: f64) -> Edge {
        Edge::Arc { center, radius, start_angle, span, free: false }
    }

    pub fn free_arc(center: Point, radius: f64, start_angle: f64, span: f64) -> Edge {
        Edge::Arc { center, radius, start_angle, span, free: true }
    }

    pub fn circle(center: Point, radius: f64) -> Edge {
        Edge::arc(center, radius, 0.0, TAU)
    }

    pub fn is_free(&self) -> bool {
        match *self {
            Edge::Segment { free, .. } | Edge::Arc { free, .. } => free,
        }
    }

    pub fn with_free(self, flag: bool) -> Edge {
        match self {
            Edge::Segment { start, end, .. } => Edge::Segment { start, end, free: flag },
            Edge::Arc { center, radius, start_angle, span, .. } => {
                Edge::Arc { center, radius, start_angle, span, free: flag }
            }
        }
    }

    pub fn start(&self) -> Point {
        match *self {
            Edge::Segment { start, .. } => start,
            Edge::Arc { center, radius, start_angle, .. } => center + Point::polar(start_angle) * radius,
        }
    }

    pub fn end(&self) -> Point {
        match *self {
            Edge::Segment { end, .. } => end,
            Edge::Arc { center, radius, start_angle, span, .. } => center + Point::polar(start_angle + span) * radius,
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Edge::Segment { start, end, .. } => start.dist(end),
            Edge::Arc { radius, span, .. } => radius * span.abs(),
        }
    }

    /// Signed curvature along the direction of travel.
    pub fn curvature(&self) -> f64 {
        match *self {
            Edge::Segment { .. } => 0.0,
            Edge::Arc { radius, span, .. } => span.signum() / radius,
        }
    }

    /// Point and unit tangent at arclength `s` from the start.
    pub fn frame(&self, s: f64) -> (Point, Point) {
        match *self {
            Edge::Segment { start, end, .. } => {
                let d = (end - start).normalized();
                (start + d * s, d)
            }
            Edge::Arc { center, radius, start_angle, span, .. } => {
                let sign = span.signum();
                let theta = start_angle + sign * s / radius;
                let u = Point::polar(theta);
                (center + u * radius, u.perp() * sign)
            }
        }
    }

    pub fn start_tangent(&self) -> Point {
        self.frame(0.0).1
    }

    pub fn end_tangent(&self) -> Point {
        self.frame(self.length()).1
    }

    /// Contribution `½∮(x dy − y dx)` of this edge to the enclosed area.
    pub fn area_term(&self) -> f64 {
        match *self {
            Edge::Segment { start, end, .. } => 0.5 * start.cross(end),
            Edge::Arc { center, radius, start_angle, span, .. } => {
                let t0 = start_angle;
                let t1 = start_angle + span;
                0.5 * (radius * radius * span + center.x * radius * (t1.sin() - t0.sin())
                    - center.y * radius * (t1.cos() - t0.cos()))
            }
        }
    }

    /// Euclidean distance from `p` to the edge.
    pub fn distance_to(&self, p: Point) -> f64 {
        match *self {
            Edge::Segment { start, end, .. } => super::point::point_segment_distance(p, start, end),
            Edge::Arc { center, radius, .. } => {
                let v = p - center;
                let rho = v.norm();
                if rho > 0.0 && self.covers_angle(v.angle()) {
                    (rho - radius).abs()
                } else {
                    p.dist(self.start()).min(p.dist(self.end()))
                }
            }
        }
    }

    /// Whether the direction `phi` (seen from the arc center) lies on the arc.
    pub fn covers_angle(&self, phi: f64) -> bool {
        match *self {
            Edge::Segment { .. } => false,
            Edge::Arc { start_angle, span, .. } => {
                if span.abs() >= TAU {
                    return true;
                }
                let delta = (span.signum() * (phi - start_angle)).rem_euclid(TAU);
                delta <= span.abs() + 1e-14
            }
        }
    }

    /// Sub-edge between arclengths `s0 < s1`.
    pub fn sub(&self, s0: f64, s1: f64) -> Edge {
        match *self {
            Edge::Segment { free, .. } => Edge::Segment { start: self.frame(s0).0, end: self.frame(s1).0, free },
            Edge::Arc { center, radius, start_angle, span, free } => {
                let sign = span.signum();
                Edge::Arc {
                    center,
                    radius,
                    start_angle: start_angle + sign * s0 / radius,
                    span: sign * (s1 - s0) / radius,
                    free,
                }
            }
        }
    }

    pub fn reversed(&self) -> Edge {
        match *self {
            Edge::Segment { start, end, free } => Edge::Segment { start: end, end: start, free },
            Edge::Arc { center, radius, start_angle, span, free } => {
                Edge::Arc { center, radius, start_angle: start_angle + span, span: -span, free }
            }
        }
    }

    pub fn transformed(&self, scale: f64, shift: Point) -> Edge {
        match *self {
            Edge::Segment { start, end, free } => {
                Edge::Segment { start: start * scale + shift, end: end * scale + shift, free }
            }
            Edge::Arc { center, radius, start_angle, span, free } => {
                Edge::Arc { center: center * scale + shift, radius: radius * scale, start_angle, span, free }
            }
        }
    }

    /// Append the start point and interior chord points to `out`, with every
    /// arc chord's sagitta at most `tol`.
    pub fn polygonize_into(&self, tol: f64, out: &mut Vec<Point>) {
        match *self {
            Edge::Segment { start, .. } => out.push(start),
            Edge::Arc { center, radius, start_angle, span, .. } => {
                let n = arc_chord_count(radius, span, tol);
                for i in 0..n {
                    let theta = start_angle + span * i as f64 / n as f64;
                    out.push(center + Point::polar(theta) * radius);
                }
            }
        }
    }

    fn bbox_into(&self, lo: &mut Point, hi: &mut Point) {
        let mut add = |p: Point| {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        };
        add(self.start());
        add(self.end());
        if let Edge::Arc { center, radius, .. } = *self {
            for k in 0..4 {
                let phi = k as f64 * FRAC_PI_2;
                if self.covers_angle(phi) {
                    add(center + Point::polar(phi) * radius);
                }
            }
        }
    }
}

/// Number of chords needed so that each has sagitta at most `tol`.
pub fn arc_chord_count(radius: f64, span: f64, tol: f64) -> usize {
    let max_angle = if tol >= radius { FRAC_PI_2 } else { (2.0 * (1.0 - tol / radius).acos()).min(FRAC_PI_2) };
    ((span.abs() / max_angle).ceil() as usize).max(1)
}

#[derive(Deserialize)]
struct RawArcPolygon {
    edges: Vec<Edge>,
    #[serde(default)]
    holes: Vec<Vec<Edge>>,
}

/// A region bounded by one positively oriented outer loop and optional
/// negatively oriented hole loops. Slits appear as a segment traversed in
/// both directions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawArcPolygon")]
pub struct ArcPolygon {
    edges: Vec<Edge>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    holes: Vec<Vec<Edge>>,
}

impl TryFrom<RawArcPolygon> for ArcPolygon {
    type Error = Error;

    fn try_from(raw: RawArcPolygon) -> Result<Self> {
        ArcPolygon::with_holes(raw.edges, raw.holes)
    }
}

impl ArcPolygon {
    pub fn new(edges: Vec<Edge>) -> Result<Self> {
        ArcPolygon::with_holes(edges, Vec::new())
    }

    pub fn with_holes(edges: Vec<Edge>, holes: Vec<Vec<Edge>>) -> Result<Self> {
        let shape = ArcPolygon { edges, holes };
        shape.validate()?;
        Ok(shape)
    }

    /// Construct without validation; for shapes produced by the solvers.
    pub(crate) fn new_unchecked(edges: Vec<Edge>, holes: Vec<Vec<Edge>>) -> Self {
        ArcPolygon { edges, holes }
    }

    pub fn from_vertices(vertices: &[Point]) -> Result<Self> {
        let n = vertices.len();
        ArcPolygon::new((0..n).map(|i| Edge::segment(vertices[i], vertices[(i + 1) % n])).collect())
    }

    pub fn disc(center: Point, radius: f64) -> Result<Self> {
        ArcPolygon::new(vec![Edge::circle(center, radius)])
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn holes(&self) -> &[Vec<Edge>] {
        &self.holes
    }

    pub fn loops(&self) -> impl Iterator<Item = &[Edge]> {
        std::iter::once(self.edges.as_slice()).chain(self.holes.iter().map(Vec::as_slice))
    }

    pub fn all_edges(&self) -> impl Iterator<Item = &Edge> {
        self.loops().flatten()
    }

    /// Check closure, orientation and simplicity.
    pub fn validate(&self) -> Result<()> {
        if self.edges.is_empty() {
            return invalid("arc polygon has no edges");
        }
        for e in self.all_edges() {
            let ok = match *e {
                Edge::Segment { start, end, .. } => start.is_finite() && end.is_finite() && start != end,
                Edge::Arc { center, radius, start_angle, span, .. } => {
                    center.is_finite()
                        && radius > 0.0
                        && radius.is_finite()
                        && start_angle.is_finite()
                        && span != 0.0
                        && span.abs() <= TAU
                }
            };
            if !ok {
                return invalid(format!("degenerate edge {e:?}"));
            }
        }
        let diam = self.diameter();
        let tol = 1e-9 * diam;
        for (li, lp) in self.loops().enumerate() {
            let n = lp.len();
            for i in 0..n {
                let gap = lp[i].end().dist(lp[(i + 1) % n].start());
                if gap > tol {
                    return invalid(format!("loop {li}: edge {i} ends {gap:.3e} away from the start of the next edge"));
                }
            }
            let area: f64 = lp.iter().map(Edge::area_term).sum();
            if li == 0 && area <= 0.0 {
                return invalid("outer loop must be positively oriented with nonzero area");
            }
            if li > 0 && area >= 0.0 {
                return invalid(format!("hole {li} must be negatively oriented"));
            }
        }
        self.check_simple(diam)
    }

    fn check_simple(&self, diam: f64) -> Result<()> {
        // Chords tagged with (loop, edge, chord index within loop).
        struct Chord {
            a: Point,
            b: Point,
            edge: usize,
            idx: usize,
            loop_id: usize,
            loop_len: usize,
        }
        let tol = 1e-4 * diam;
        let mut chords = Vec::new();
        let mut edge_base = 0;
        for (li, lp) in self.loops().enumerate() {
            let mut pts = Vec::new();
            let mut owner = Vec::new();
            for (ei, e) in lp.iter().enumerate() {
                let before = pts.len();
                e.polygonize_into(tol, &mut pts);
                owner.extend(std::iter::repeat_n(edge_base + ei, pts.len() - before));
            }
            let m = pts.len();
            for i in 0..m {
                chords.push(Chord { a: pts[i], b: pts[(i + 1) % m], edge: owner[i], idx: i, loop_id: li, loop_len: m });
            }
            edge_base += lp.len();
        }
        let all: Vec<&Edge> = self.all_edges().collect();
        let touch_tol = 1e-9 * diam;
        let shares_end =
            |c: &Chord, d: &Chord| [c.a, c.b].iter().any(|p| p.dist(d.a) <= touch_tol || p.dist(d.b) <= touch_tol);
        let mut order: Vec<usize> = (0..chords.len()).collect();
        order.sort_by(|&i, &j| chords[i].a.x.min(chords[i].b.x).total_cmp(&chords[j].a.x.min(chords[j].b.x)));
        for (oi, &i) in order.iter().enumerate() {
            let c = &chords[i];
            let xmax = c.a.x.max(c.b.x);
            for &j in &order[oi + 1..] {
                let d = &chords[j];
                if d.a.x.min(d.b.x) > xmax {
                    break;
                }
                if c.loop_id == d.loop_id {
                    let diff = c.idx.abs_diff(d.idx);
                    if diff <= 1 || diff == c.loop_len - 1 {
                        continue;
                    }
                }
                if !segments_intersect(c.a, c.b, d.a, d.b) {
                    continue;
                }
                if is_slit_pair(all[c.edge], all[d.edge], touch_tol) {
                    continue;
                }
                if shares_end(c, d) && !crosses_properly(c.a, c.b, d.a, d.b) {
                    continue;
                }
                return invalid(format!("boundary self-intersects near ({:.6}, {:.6})", c.a.x, c.a.y));
            }
        }
        Ok(())
    }

    /// Exact perimeter and area.
    pub fn metrics(&self) -> (f64, f64) {
        (self.perimeter(), self.area())
    }

    pub fn perimeter(&self) -> f64 {
        self.all_edges().map(Edge::length).sum()
    }

    pub fn area(&self) -> f64 {
        self.all_edges().map(Edge::area_term).sum()
    }

    /// Isoperimetric quotient P/A.
    pub fn quotient(&self) -> f64 {
        let (p, a) = self.metrics();
        p / a
    }

    /// Bounding box `(min, max)`.
    pub fn bbox(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for e in self.all_edges() {
            e.bbox_into(&mut lo, &mut hi);
        }
        (lo, hi)
    }

    /// Bounding-box diagonal, an upper bound for the diameter used as the
    /// length scale of relative tolerances.
    pub fn diameter(&self) -> f64 {
        let (lo, hi) = self.bbox();
        lo.dist(hi)
    }

    /// Outer loop with arcs replaced by chords of sagitta ≤ `tol`.
    pub fn polygonize(&self, tol: f64) -> Vec<Point> {
        let mut out = Vec::new();
        for e in &self.edges {
            e.polygonize_into(tol, &mut out);
        }
        out
    }

    /// All loops (outer first) polygonized.
    pub fn polygonize_rings(&self, tol: f64) -> Vec<Vec<Point>> {
        self.loops()
            .map(|lp| {
                let mut out = Vec::new();
                for e in lp {
                    e.polygonize_into(tol, &mut out);
                }
                out
            })
            .collect()
    }

    /// Even-odd containment against a fine polygonization.
    pub fn contains(&self, p: Point) -> bool {
        rings_contain(&self.polygonize_rings(1e-7 * self.diameter()), p)
    }

    /// Distance from `p` to the boundary (both sides of slits count).
    pub fn distance_to_boundary(&self, p: Point) -> f64 {
        self.all_edges().map(|e| e.distance_to(p)).fold(f64::INFINITY, f64::min)
    }

    /// Numerical inradius: grid sampling followed by a compass search on the
    /// boundary distance. Returns the radius and the center found.
    pub fn inradius(&self) -> (f64, Point) {
        let rings = self.polygonize_rings(1e-7 * self.diameter());
        let (lo, hi) = self.bbox();
        let n = 96;
        let mut seeds: Vec<(f64, Point)> = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let p = Point::new(
                    lo.x + (hi.x - lo.x) * (i as f64 + 0.5) / n as f64,
                    lo.y + (hi.y - lo.y) * (j as f64 + 0.5) / n as f64,
                );
                if rings_contain(&rings, p) {
                    seeds.push((self.distance_to_boundary(p), p));
                }
            }
        }
        seeds.sort_by(|a, b| b.0.total_cmp(&a.0));
        seeds.truncate(8);
        let dirs: Vec<Point> = (0..16).map(|k| Point::polar(k as f64 * PI / 8.0)).collect();
        let mut best = (0.0, lo.lerp(hi, 0.5));
        for (mut d, mut p) in seeds {
            let mut step = (hi.x - lo.x).max(hi.y - lo.y) / n as f64;
            while step > 1e-13 * self.diameter() {
                let mut moved = false;
                for dir in &dirs {
                    let cand = p + *dir * step;
                    let dc = self.distance_to_boundary(cand);
                    if dc > d && rings_contain(&rings, cand) {
                        d = dc;
                        p = cand;
                        moved = true;
                        break;
                    }
                }
                if !moved {
                    step *= 0.5;
                }
            }
            if d > best.0 {
                best = (d, p);
            }
        }
        best
    }

    /// Image under `p ↦ scale·p + shift`.
    pub fn transformed(&self, scale: f64, shift: Point) -> ArcPolygon {
        let map = |lp: &[Edge]| lp.iter().map(|e| e.transformed(scale, shift)).collect::<Vec<_>>();
        ArcPolygon { edges: map(&self.edges), holes: self.holes.iter().map(|h| map(h)).collect() }
    }
}

fn crosses_properly(a0: Point, a1: Point, b0: Point, b1: Point) -> bool {
    let d1 = (a1 - a0).cross(b0 - a0);
    let d2 = (a1 - a0).cross(b1 - a0);
    let d3 = (b1 - b0).cross(a0 - b0);
    let d4 = (b1 - b0).cross(a1 - b0);
    let scale = (a1 - a0).norm() * (b1 - b0).norm();
    let eps = 1e-12 * scale;
    ((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) && ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps))
}

/// Two segment edges lying on one line with opposite directions: the two
/// sides of a slit.
fn is_slit_pair(e: &Edge, f: &Edge, tol: f64) -> bool {
    match (*e, *f) {
        (Edge::Segment { start: a0, end: a1, .. }, Edge::Segment { start: b0, end: b1, .. }) => {
            let da = (a1 - a0).normalized();
            let db = (b1 - b0).normalized();
            da.dot(db) < 0.0
                && da.cross(db).abs() < 1e-9
                && da.cross(b0 - a0).abs() <= tol
                && da.cross(b1 - a0).abs() <= tol
        }
        _ => false,
    }
}
