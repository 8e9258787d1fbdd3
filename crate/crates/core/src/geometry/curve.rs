//! Arclength-parametrized planar curves.
//!
//! Every curve is evaluated through its unit-speed parametrization
//! `q ∈ [0, length]`. The unit normal is always the unit tangent rotated by
//! +π/2, and the signed curvature is `κ(q) = γ''(q) · N(q)`, so a
//! counterclockwise circle of radius `R` has `κ = 1/R` and its normal points
//! to the center.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::point::Point;
use crate::error::{domain, invalid, Error, Result};

/// Largest tangent-angle change allowed between consecutive polyline chords.
pub const MAX_POLYLINE_TURN: f64 = 0.1;

const JOIN_TOL: f64 = 1e-9;
const TANGENT_TOL: f64 = 1e-6;

/// Serialized description of a curve; see [`Curve`] for the validated form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveSpec {
    Segment {
        start: Point,
        end: Point,
    },
    /// Circular arc; `span` is signed (positive = counterclockwise) with
    /// `0 < |span| < 2π`.
    Arc {
        center: Point,
        radius: f64,
        start_angle: f64,
        span: f64,
    },
    Circle {
        center: Point,
        radius: f64,
        #[serde(default)]
        start_angle: f64,
        #[serde(default = "default_ccw")]
        ccw: bool,
    },
    /// Samples of an arclength-parametrized curve. Closed when the first and
    /// last samples coincide.
    Polyline {
        points: Vec<Point>,
    },
    /// Tangent-continuous chain of segments and arcs (an arc spline).
    Chain {
        pieces: Vec<CurveSpec>,
    },
}

fn default_ccw() -> bool {
    true
}

/// Which family a curve belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Segment,
    CircularArc,
    FullCircle,
    SampledPolyline,
    ArcChain,
}

/// A constant-curvature piece: the building block of exact tube boundaries.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Piece {
    Segment { start: Point, end: Point },
    Arc { center: Point, radius: f64, start_angle: f64, span: f64 },
}

impl Piece {
    pub fn length(&self) -> f64 {
        match *self {
            Piece::Segment { start, end } => start.dist(end),
            Piece::Arc { radius, span, .. } => radius * span.abs(),
        }
    }

    pub fn curvature(&self) -> f64 {
        match *self {
            Piece::Segment { .. } => 0.0,
            Piece::Arc { radius, span, .. } => span.signum() / radius,
        }
    }

    /// Point and unit tangent at local arclength `s`.
    pub fn frame(&self, s: f64) -> (Point, Point) {
        match *self {
            Piece::Segment { start, end } => {
                let d = (end - start).normalized();
                (start + d * s, d)
            }
            Piece::Arc { center, radius, start_angle, span } => {
                let sign = span.signum();
                let theta = start_angle + sign * s / radius;
                let u = Point::polar(theta);
                (center + u * radius, u.perp() * sign)
            }
        }
    }

    fn reversed(&self) -> Piece {
        match *self {
            Piece::Segment { start, end } => Piece::Segment { start: end, end: start },
            Piece::Arc { center, radius, start_angle, span } => {
                Piece::Arc { center, radius, start_angle: start_angle + span, span: -span }
            }
        }
    }

    fn to_spec(self) -> CurveSpec {
        match self {
            Piece::Segment { start, end } => CurveSpec::Segment { start, end },
            Piece::Arc { center, radius, start_angle, span } => CurveSpec::Arc { center, radius, start_angle, span },
        }
    }
}

/// A validated unit-speed planar curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CurveSpec", into = "CurveSpec")]
pub struct Curve {
    spec: CurveSpec,
    /// Piece list for constant-curvature kinds; empty for polylines.
    pieces: Vec<Piece>,
    /// Cumulative arclength at each polyline sample or at each piece start.
    stations: Vec<f64>,
    /// Three-point curvature at each polyline sample (NaN at open ends).
    sample_curvature: Vec<f64>,
    length: f64,
    closed: bool,
}

impl From<Curve> for CurveSpec {
    fn from(c: Curve) -> Self {
        c.spec
    }
}

impl TryFrom<CurveSpec> for Curve {
    type Error = Error;

    fn try_from(spec: CurveSpec) -> Result<Self> {
        Curve::new(spec)
    }
}

fn check_piece(spec: &CurveSpec) -> Result<Piece> {
    match *spec {
        CurveSpec::Segment { start, end } => {
            if !start.is_finite() || !end.is_finite() {
                return invalid("segment endpoints must be finite");
            }
            if start.dist(end) == 0.0 {
                return invalid("segment has zero length");
            }
            Ok(Piece::Segment { start, end })
        }
        CurveSpec::Arc { center, radius, start_angle, span } => {
            if !(radius > 0.0 && radius.is_finite()) || !center.is_finite() {
                return invalid(format!("arc radius must be positive and finite, got {radius}"));
            }
            if !(span.abs() > 0.0 && span.abs() < TAU) || !start_angle.is_finite() {
                return invalid(format!("arc span must satisfy 0 < |span| < 2π, got {span}"));
            }
            Ok(Piece::Arc { center, radius, start_angle, span })
        }
        _ => invalid("chain pieces must be segments or arcs"),
    }
}

impl Curve {
    pub fn new(spec: CurveSpec) -> Result<Self> {
        let mut curve = Curve {
            spec: spec.clone(),
            pieces: Vec::new(),
            stations: Vec::new(),
            sample_curvature: Vec::new(),
            length: 0.0,
            closed: false,
        };
        match &spec {
            CurveSpec::Segment { .. } | CurveSpec::Arc { .. } => {
                let piece = check_piece(&spec)?;
                curve.length = piece.length();
                curve.pieces.push(piece);
                curve.stations = vec![0.0];
            }
            CurveSpec::Circle { center, radius, start_angle, ccw } => {
                if !(*radius > 0.0 && radius.is_finite()) || !center.is_finite() {
                    return invalid(format!("circle radius must be positive, got {radius}"));
                }
                let span = if *ccw { TAU } else { -TAU };
                curve.pieces.push(Piece::Arc { center: *center, radius: *radius, start_angle: *start_angle, span });
                curve.length = TAU * radius;
                curve.stations = vec![0.0];
                curve.closed = true;
            }
            CurveSpec::Chain { pieces } => {
                if pieces.is_empty() {
                    return invalid("chain needs at least one piece");
                }
                let mut acc = 0.0;
                for (i, p) in pieces.iter().enumerate() {
                    let piece = check_piece(p)?;
                    if let Some(prev) = curve.pieces.last() {
                        check_join(prev, &piece, i)?;
                    }
                    curve.stations.push(acc);
                    acc += piece.length();
                    curve.pieces.push(piece);
                }
                curve.length = acc;
                let first = curve.pieces[0];
                let last = *curve.pieces.last().unwrap();
                let (p0, t0) = first.frame(0.0);
                let (p1, t1) = last.frame(last.length());
                let scale = acc.max(1.0);
                if p0.dist(p1) <= JOIN_TOL * scale {
                    if t0.cross(t1).abs() > TANGENT_TOL || t0.dot(t1) < 0.0 {
                        return invalid("closed chain is not tangent-continuous at its seam");
                    }
                    curve.closed = true;
                }
            }
            CurveSpec::Polyline { points } => {
                curve.init_polyline(points)?;
            }
        }
        Ok(curve)
    }

    fn init_polyline(&mut self, points: &[Point]) -> Result<()> {
        if points.len() < 3 {
            return invalid("polyline needs at least 3 samples");
        }
        if points.iter().any(|p| !p.is_finite()) {
            return invalid("polyline samples must be finite");
        }
        let mut acc = 0.0;
        self.stations.push(0.0);
        for w in points.windows(2) {
            let h = w[0].dist(w[1]);
            if h == 0.0 {
                return invalid("polyline has repeated consecutive samples");
            }
            acc += h;
            self.stations.push(acc);
        }
        self.length = acc;
        let n = points.len();
        self.closed = points[0].dist(points[n - 1]) <= JOIN_TOL * acc;
        // Turning between consecutive chords (and across the seam when closed).
        let chord = |i: usize| points[i + 1] - points[i];
        let turns = (1..n - 1).map(|i| (chord(i - 1), chord(i)));
        let seam = self.closed.then(|| (chord(n - 2), chord(0)));
        for (a, b) in turns.chain(seam) {
            let turn = a.cross(b).atan2(a.dot(b)).abs();
            if turn > MAX_POLYLINE_TURN {
                return invalid(format!("polyline turns by {turn:.4} rad between samples (limit {MAX_POLYLINE_TURN})"));
            }
        }
        self.sample_curvature = (0..n)
            .map(|i| match self.neighbours(points, i) {
                Some((prev, next)) => three_point_curvature(prev, points[i], next),
                None => f64::NAN,
            })
            .collect();
        Ok(())
    }

    fn neighbours(&self, points: &[Point], i: usize) -> Option<(Point, Point)> {
        let n = points.len();
        if i > 0 && i + 1 < n {
            Some((points[i - 1], points[i + 1]))
        } else if self.closed {
            // First and last samples coincide.
            Some((points[n - 2], points[1]))
        } else {
            None
        }
    }

    pub fn segment(start: Point, end: Point) -> Result<Self> {
        Curve::new(CurveSpec::Segment { start, end })
    }

    pub fn arc(center: Point, radius: f64, start_angle: f64, span: f64) -> Result<Self> {
        Curve::new(CurveSpec::Arc { center, radius, start_angle, span })
    }

    pub fn circle(center: Point, radius: f64) -> Result<Self> {
        Curve::new(CurveSpec::Circle { center, radius, start_angle: 0.0, ccw: true })
    }

    pub fn polyline(points: Vec<Point>) -> Result<Self> {
        Curve::new(CurveSpec::Polyline { points })
    }

    pub fn chain(pieces: Vec<CurveSpec>) -> Result<Self> {
        Curve::new(CurveSpec::Chain { pieces })
    }

    pub fn spec(&self) -> &CurveSpec {
        &self.spec
    }

    pub fn kind(&self) -> CurveKind {
        match self.spec {
            CurveSpec::Segment { .. } => CurveKind::Segment,
            CurveSpec::Arc { .. } => CurveKind::CircularArc,
            CurveSpec::Circle { .. } => CurveKind::FullCircle,
            CurveSpec::Polyline { .. } => CurveKind::SampledPolyline,
            CurveSpec::Chain { .. } => CurveKind::ArcChain,
        }
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Constant-curvature pieces, or `None` for sampled polylines.
    pub fn pieces(&self) -> Option<&[Piece]> {
        (!self.pieces.is_empty()).then_some(self.pieces.as_slice())
    }

    /// Arclength positions where the curvature may be discontinuous,
    /// including both ends.
    pub fn curvature_breaks(&self) -> Vec<f64> {
        let mut b = self.stations.clone();
        b.push(self.length);
        b
    }

    /// Arclength interval on which [`Curve::curvature`] is defined.
    pub fn curvature_domain(&self) -> (f64, f64) {
        match &self.spec {
            CurveSpec::Polyline { .. } if !self.closed => {
                let n = self.stations.len();
                (self.stations[1], self.stations[n - 2])
            }
            _ => (0.0, self.length),
        }
    }

    fn check_q(&self, q: f64) -> Result<()> {
        let tol = 1e-12 * self.length.max(1.0);
        if !(q >= -tol && q <= self.length + tol) {
            return domain(format!("arclength {q} outside [0, {}]", self.length));
        }
        Ok(())
    }

    /// Locate `q` in the station table: index of the interval and local offset.
    fn locate(&self, q: f64) -> (usize, f64) {
        let q = q.clamp(0.0, self.length);
        let last = match self.spec {
            CurveSpec::Polyline { .. } => self.stations.len() - 2,
            _ => self.stations.len() - 1,
        };
        let idx = match self.stations.binary_search_by(|s| s.total_cmp(&q)) {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        }
        .min(last);
        (idx, q - self.stations[idx])
    }

    fn polyline_points(&self) -> &[Point] {
        match &self.spec {
            CurveSpec::Polyline { points } => points,
            _ => &[],
        }
    }

    /// Sample tangent at polyline vertex `i` (central chord direction).
    fn sample_tangent(&self, i: usize) -> Point {
        let pts = self.polyline_points();
        let n = pts.len();
        match self.neighbours(pts, i) {
            Some((prev, next)) => (next - prev).normalized(),
            None if i == 0 => (pts[1] - pts[0]).normalized(),
            None => (pts[n - 1] - pts[n - 2]).normalized(),
        }
    }

    /// Point and unit tangent at `q`, clamping `q` into the curve.
    pub fn frame_clamped(&self, q: f64) -> (Point, Point) {
        let (idx, s) = self.locate(q);
        if self.pieces.is_empty() {
            let pts = self.polyline_points();
            let h = self.stations[idx + 1] - self.stations[idx];
            let w = (s / h).clamp(0.0, 1.0);
            let p = pts[idx].lerp(pts[idx + 1], w);
            let t = self.sample_tangent(idx).lerp(self.sample_tangent(idx + 1), w);
            (p, t.normalized())
        } else {
            self.pieces[idx].frame(s)
        }
    }

    pub fn point(&self, q: f64) -> Result<Point> {
        self.check_q(q)?;
        Ok(self.frame_clamped(q).0)
    }

    pub fn tangent(&self, q: f64) -> Result<Point> {
        self.check_q(q)?;
        Ok(self.frame_clamped(q).1)
    }

    /// Unit normal: the tangent rotated by +π/2.
    pub fn normal(&self, q: f64) -> Result<Point> {
        Ok(self.tangent(q)?.perp())
    }

    /// Signed curvature at `q`. Analytic for segments, arcs, circles and
    /// chains; three-point central differences interpolated linearly between
    /// interior samples for polylines.
    pub fn curvature(&self, q: f64) -> Result<f64> {
        self.check_q(q)?;
        let (lo, hi) = self.curvature_domain();
        let tol = 1e-12 * self.length.max(1.0);
        if q < lo - tol || q > hi + tol {
            return domain(format!(
                "polyline curvature needs q in [{lo}, {hi}] (one sample away from the ends), got {q}"
            ));
        }
        Ok(self.curvature_clamped(q))
    }

    /// Curvature at `q` after clamping into [`Curve::curvature_domain`].
    pub fn curvature_clamped(&self, q: f64) -> f64 {
        if self.pieces.is_empty() {
            let (lo, hi) = self.curvature_domain();
            let (idx, s) = self.locate(q.clamp(lo, hi));
            let h = self.stations[idx + 1] - self.stations[idx];
            let w = (s / h).clamp(0.0, 1.0);
            let k0 = self.sample_curvature[idx];
            let k1 = self.sample_curvature[idx + 1];
            match (k0.is_nan(), k1.is_nan()) {
                (false, false) => k0 + (k1 - k0) * w,
                (true, _) => k1,
                (_, true) => k0,
            }
        } else {
            let (idx, _) = self.locate(q);
            self.pieces[idx].curvature()
        }
    }

    /// Largest |κ| over the curve (exact for piecewise-constant kinds,
    /// over samples for polylines).
    pub fn max_abs_curvature(&self) -> f64 {
        if self.pieces.is_empty() {
            self.sample_curvature.iter().filter(|k| !k.is_nan()).fold(0.0, |m, k| m.max(k.abs()))
        } else {
            self.pieces.iter().fold(0.0, |m, p| m.max(p.curvature().abs()))
        }
    }

    /// The same point set traversed backwards (`s ↦ length − s`).
    pub fn reversed(&self) -> Curve {
        let spec = match &self.spec {
            CurveSpec::Segment { start, end } => CurveSpec::Segment { start: *end, end: *start },
            CurveSpec::Arc { .. } => self.pieces[0].reversed().to_spec(),
            CurveSpec::Circle { center, radius, start_angle, ccw } => {
                CurveSpec::Circle { center: *center, radius: *radius, start_angle: *start_angle, ccw: !ccw }
            }
            CurveSpec::Polyline { points } => CurveSpec::Polyline { points: points.iter().rev().copied().collect() },
            CurveSpec::Chain { .. } => {
                CurveSpec::Chain { pieces: self.pieces.iter().rev().map(|p| p.reversed().to_spec()).collect() }
            }
        };
        Curve::new(spec).expect("reversal preserves validity")
    }
}

fn check_join(prev: &Piece, next: &Piece, index: usize) -> Result<()> {
    let (p_end, t_end) = prev.frame(prev.length());
    let (p_start, t_start) = next.frame(0.0);
    let scale = prev.length().max(next.length()).max(1.0);
    if p_end.dist(p_start) > JOIN_TOL * scale {
        return invalid(format!("chain piece {index} does not start where piece {} ends", index - 1));
    }
    if t_end.cross(t_start).abs() > TANGENT_TOL || t_end.dot(t_start) < 0.0 {
        return invalid(format!("chain is not tangent-continuous at piece {index}"));
    }
    Ok(())
}

/// Signed curvature from three consecutive samples by central differences
/// for the second derivative, projected on the +π/2-rotated tangent.
pub fn three_point_curvature(prev: Point, at: Point, next: Point) -> f64 {
    let h_minus = at.dist(prev);
    let h_plus = next.dist(at);
    let second = ((next - at) * (1.0 / h_plus) - (at - prev) * (1.0 / h_minus)) * (2.0 / (h_plus + h_minus));
    let normal = (next - prev).normalized().perp();
    second.dot(normal)
}

/// Normalize an angle into `(-π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta % TAU;
    if t <= -PI {
        t += TAU;
    } else if t > PI {
        t -= TAU;
    }
    t
}
