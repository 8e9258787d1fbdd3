//! Convex polygons: Cheeger constant from the inner parallel body.
//!
//! For a bounded convex domain the Cheeger set is `Ω^{r*} ⊕ B_{r*}` where
//! `r*` is the unique root of `|Ω^r| = πr²`, and `h = 1/r*`.

use std::collections::VecDeque;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::point::{signed_area, Point};
use crate::geometry::{ArcPolygon, Edge};
use crate::optimize::bisect;
use crate::result::{CheegerResult, Method};

#[derive(Deserialize)]
#[serde(untagged)]
enum RawConvex {
    List(Vec<Point>),
    Object { vertices: Vec<Point> },
}

/// Counterclockwise convex polygon. Repeated and collinear vertices are
/// dropped on construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawConvex")]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl TryFrom<RawConvex> for ConvexPolygon {
    type Error = Error;

    fn try_from(raw: RawConvex) -> Result<Self> {
        match raw {
            RawConvex::List(v) | RawConvex::Object { vertices: v } => ConvexPolygon::new(v),
        }
    }
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return invalid("convex polygon needs at least 3 vertices");
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return invalid("vertices must be finite");
        }
        let scale = vertices.iter().map(|p| p.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let eps = 1e-14 * scale;
        let mut v: Vec<Point> = Vec::with_capacity(vertices.len());
        for p in vertices {
            if v.last().is_none_or(|q: &Point| q.dist(p) > eps) {
                v.push(p);
            }
        }
        while v.len() > 1 && v[0].dist(*v.last().unwrap()) <= eps {
            v.pop();
        }
        // Drop collinear vertices until none are left.
        loop {
            let n = v.len();
            if n < 3 {
                return invalid("convex polygon is degenerate");
            }
            let idx = (0..n).find(|&i| {
                let a = v[(i + n - 1) % n];
                let b = v[i];
                let c = v[(i + 1) % n];
                (b - a).cross(c - b).abs() <= 1e-14 * (b - a).norm() * (c - b).norm() && (b - a).dot(c - b) > 0.0
            });
            match idx {
                Some(i) => {
                    v.remove(i);
                }
                None => break,
            }
        }
        let n = v.len();
        let mut total_turn = 0.0;
        for i in 0..n {
            let e0 = v[(i + 1) % n] - v[i];
            let e1 = v[(i + 2) % n] - v[(i + 1) % n];
            if e0.cross(e1) <= 0.0 {
                return invalid(format!(
                    "polygon is not strictly convex and counterclockwise at vertex {}",
                    (i + 1) % n
                ));
            }
            total_turn += e0.cross(e1).atan2(e0.dot(e1));
        }
        if (total_turn - 2.0 * PI).abs() > 1e-6 {
            return invalid("polygon winds more than once");
        }
        Ok(ConvexPolygon { vertices: v })
    }

    /// Axis-aligned rectangle `[-a, a] × [-b, b]`.
    pub fn rectangle(a: f64, b: f64) -> Result<Self> {
        ConvexPolygon::new(vec![Point::new(-a, -b), Point::new(a, -b), Point::new(a, b), Point::new(-a, b)])
    }

    /// Regular `n`-gon inscribed in the circle of radius `radius`.
    pub fn regular(n: usize, radius: f64) -> Result<Self> {
        ConvexPolygon::new((0..n).map(|i| Point::polar(2.0 * PI * i as f64 / n as f64) * radius).collect())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        crate::geometry::point::loop_length(&self.vertices)
    }

    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        let mut d: f64 = 0.0;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                d = d.max(v[i].dist(v[j]));
            }
        }
        d
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        ConvexPolygon::new(self.vertices.iter().map(|&p| p * factor).collect())
    }

    pub fn to_arcpolygon(&self) -> ArcPolygon {
        let v = &self.vertices;
        let n = v.len();
        ArcPolygon::new_unchecked((0..n).map(|i| Edge::segment(v[i], v[(i + 1) % n])).collect(), Vec::new())
    }

    /// Inner parallel body with the supporting edge index of each side.
    pub(crate) fn inset(&self, r: f64) -> Option<Inset> {
        inset_polygon(&self.vertices, r)
    }
}

/// `Ω^r` together with, for each side `vertices[i] → vertices[i+1]`, the
/// index of the edge of `Ω` it lies on (shifted by `r`).
#[derive(Clone, Debug)]
pub(crate) struct Inset {
    pub vertices: Vec<Point>,
    pub lines: Vec<usize>,
}

#[derive(Clone, Copy)]
struct Line {
    p: Point,
    d: Point,
    id: usize,
}

impl Line {
    fn side(&self, q: Point) -> f64 {
        self.d.cross(q - self.p)
    }

    fn meet(&self, other: &Line) -> Point {
        let denom = self.d.cross(other.d);
        let s = other.d.cross(self.p - other.p) / denom;
        self.p + self.d * s
    }
}

/// Half-plane intersection of the edges of a ccw convex polygon shifted
/// inward by `r`, by the deque method (the lines are already sorted by
/// angle up to a rotation of the start).
fn inset_polygon(v: &[Point], r: f64) -> Option<Inset> {
    let n = v.len();
    let mut lines: Vec<Line> = (0..n)
        .map(|i| {
            let d = (v[(i + 1) % n] - v[i]).normalized();
            Line { p: v[i] + d.perp() * r, d, id: i }
        })
        .collect();
    let start = (0..n).min_by(|&i, &j| lines[i].d.angle().total_cmp(&lines[j].d.angle())).unwrap_or(0);
    lines.rotate_left(start);
    let scale = v.iter().map(|p| p.norm()).fold(1e-300, f64::max);
    let eps = 1e-13 * scale;

    let mut dq: VecDeque<Line> = VecDeque::with_capacity(n);
    for line in lines {
        while dq.len() >= 2 && line.side(dq[dq.len() - 2].meet(&dq[dq.len() - 1])) <= eps {
            dq.pop_back();
        }
        while dq.len() >= 2 && line.side(dq[0].meet(&dq[1])) <= eps {
            dq.pop_front();
        }
        if let Some(last) = dq.back() {
            if last.d.cross(line.d) <= 0.0 {
                // The turn between consecutive surviving lines reached π:
                // the intersection has no interior.
                return None;
            }
        }
        dq.push_back(line);
    }
    while dq.len() >= 3 && dq[0].side(dq[dq.len() - 2].meet(&dq[dq.len() - 1])) <= eps {
        dq.pop_back();
    }
    while dq.len() >= 3 && dq[dq.len() - 1].side(dq[0].meet(&dq[1])) <= eps {
        dq.pop_front();
    }
    if dq.len() < 3 {
        return None;
    }
    let m = dq.len();
    for i in 0..m {
        if dq[i].d.cross(dq[(i + 1) % m].d) <= 0.0 {
            return None;
        }
    }
    // Vertex i+1 joins line i and line i+1; rotate so that side i runs from
    // vertices[i] to vertices[i+1] on line i.
    let vertices: Vec<Point> = (0..m).map(|i| dq[(i + m - 1) % m].meet(&dq[i])).collect();
    let ids: Vec<usize> = dq.iter().map(|l| l.id).collect();
    if signed_area(&vertices) <= 0.0 {
        return None;
    }
    Some(Inset { vertices, lines: ids })
}

/// `Ω^r` as a convex polygon, or `None` when it has no interior.
pub fn inner_parallel(poly: &ConvexPolygon, r: f64) -> Option<ConvexPolygon> {
    let inset = poly.inset(r.max(0.0))?;
    ConvexPolygon::new(inset.vertices).ok()
}

/// Area of `Ω^r` (zero when empty).
pub fn inner_parallel_area(poly: &ConvexPolygon, r: f64) -> f64 {
    poly.inset(r.max(0.0)).map_or(0.0, |i| signed_area(&i.vertices))
}

/// Cheeger constant and Cheeger set of a convex polygon. Bisection on
/// `g(r) = |Ω^r| − πr²` stops when the bracket is narrower than `tol`
/// (`None`: `1e-12·diameter`).
pub fn solve_convex(poly: &ConvexPolygon, tol: Option<f64>) -> Result<CheegerResult> {
    let diam = poly.diameter();
    let tol = tol.unwrap_or(1e-12 * diam);
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let g = |r: f64| inner_parallel_area(poly, r) - PI * r * r;
    let r_hi = (poly.area() / PI).sqrt();
    let (lo, hi) = bisect(g, 0.0, r_hi, tol)?;
    let r = 0.5 * (lo + hi);
    let inset = poly.inset(r).ok_or_else(|| Error::Internal(format!("inner parallel body empty at r* = {r}")))?;
    let set = minkowski_disc(poly, &inset, r);
    Ok(CheegerResult {
        h: 1.0 / r,
        r_star: Some(r),
        cheeger_set: Some(set),
        lower_bound: if hi > 0.0 { 1.0 / hi } else { 0.0 },
        upper_bound: if lo > 0.0 { 1.0 / lo } else { f64::INFINITY },
        k: None,
        method: Method::ConvexBisection,
        tolerance: hi - lo,
        warnings: Vec::new(),
    })
}

/// `Ω^r ⊕ B_r`: inset sides shifted back outward, joined by free arcs of
/// radius `r` centered at the inset vertices.
pub(crate) fn minkowski_disc(poly: &ConvexPolygon, inset: &Inset, r: f64) -> ArcPolygon {
    let v = poly.vertices();
    let n = v.len();
    let outward = |id: usize| -(v[(id + 1) % n] - v[id]).normalized().perp();
    let m = inset.vertices.len();
    let min_len = 1e-14 * poly.diameter();
    let mut edges = Vec::with_capacity(2 * m);
    for i in 0..m {
        let a = inset.vertices[i];
        let b = inset.vertices[(i + 1) % m];
        let nrm = outward(inset.lines[i]);
        if a.dist(b) > min_len {
            edges.push(Edge::segment(a + nrm * r, b + nrm * r));
        }
        let next = outward(inset.lines[(i + 1) % m]);
        let span = nrm.cross(next).atan2(nrm.dot(next));
        edges.push(Edge::free_arc(b, r, nrm.angle(), span));
    }
    ArcPolygon::new_unchecked(edges, Vec::new())
}

/// Closed-form Cheeger constant of the rectangle `[-a, a] × [-b, b]`,
/// with `k = (a − b + √((a−b)² + πab))/a` and the corner-rounded set.
pub fn rectangle_h(a: f64, b: f64) -> Result<CheegerResult> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!("rectangle sides must be positive, got a = {a}, b = {b}")));
    }
    let root = ((a - b).powi(2) + PI * a * b).sqrt();
    let h = (a + b + root) / (2.0 * a * b);
    let k = (a - b + root) / a;
    let r = 1.0 / h;
    let c = |x: f64, y: f64| Point::new(x, y);
    let (ia, ib) = (a - r, b - r);
    use std::f64::consts::FRAC_PI_2 as Q;
    let mut edges = Vec::with_capacity(8);
    let push_seg = |edges: &mut Vec<Edge>, p: Point, q: Point| {
        if p.dist(q) > 1e-15 * (a + b) {
            edges.push(Edge::segment(p, q));
        }
    };
    push_seg(&mut edges, c(-ia, -b), c(ia, -b));
    edges.push(Edge::free_arc(c(ia, -ib), r, -Q, Q));
    push_seg(&mut edges, c(a, -ib), c(a, ib));
    edges.push(Edge::free_arc(c(ia, ib), r, 0.0, Q));
    push_seg(&mut edges, c(ia, b), c(-ia, b));
    edges.push(Edge::free_arc(c(-ia, ib), r, Q, Q));
    push_seg(&mut edges, c(-a, ib), c(-a, -ib));
    edges.push(Edge::free_arc(c(-ia, -ib), r, 2.0 * Q, Q));
    Ok(CheegerResult {
        h,
        r_star: Some(r),
        cheeger_set: Some(ArcPolygon::new_unchecked(edges, Vec::new())),
        lower_bound: h,
        upper_bound: h,
        k: Some(k),
        method: Method::RectangleClosedForm,
        tolerance: 0.0,
        warnings: Vec::new(),
    })
}
