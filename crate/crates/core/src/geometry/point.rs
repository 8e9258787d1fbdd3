use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A point (or vector) in the plane. Serialized as a two-element array.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Unit vector at angle `theta`.
    pub fn polar(theta: f64) -> Self {
        Point::new(theta.cos(), theta.sin())
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    /// Rotation by +π/2.
    pub fn perp(self) -> Self {
        Point::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Self {
        let n = self.norm();
        Point::new(self.x / n, self.y / n)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn lerp(self, other: Point, s: f64) -> Self {
        self + (other - self) * s
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<[f64; 2]> for Point {
    fn from(p: [f64; 2]) -> Self {
        Point::new(p[0], p[1])
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Point {
    fn add_assign(&mut self, o: Point) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Shoelace area of a closed vertex loop (positive when counterclockwise).
pub fn signed_area(points: &[Point]) -> f64 {
    let n = points.len();
    (0..n).map(|i| points[i].cross(points[(i + 1) % n])).sum::<f64>() * 0.5
}

/// Perimeter of a closed vertex loop.
pub fn loop_length(points: &[Point]) -> f64 {
    let n = points.len();
    (0..n).map(|i| points[i].dist(points[(i + 1) % n])).sum()
}

/// Distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let d = b - a;
    let len_sq = d.norm_sq();
    if len_sq == 0.0 {
        return p.dist(a);
    }
    let s = ((p - a).dot(d) / len_sq).clamp(0.0, 1.0);
    p.dist(a + d * s)
}

/// Minimum distance between two closed segments.
pub fn segment_segment_distance(a0: Point, a1: Point, b0: Point, b1: Point) -> f64 {
    if segments_intersect(a0, a1, b0, b1) {
        return 0.0;
    }
    point_segment_distance(a0, b0, b1)
        .min(point_segment_distance(a1, b0, b1))
        .min(point_segment_distance(b0, a0, a1))
        .min(point_segment_distance(b1, a0, a1))
}

/// Intersection test for closed segments (touching counts). Orientation
/// signs below a relative rounding threshold are treated as zero, so
/// collinear segments are decided by overlap of their projections.
pub fn segments_intersect(a0: Point, a1: Point, b0: Point, b1: Point) -> bool {
    let sign = |u: Point, v: Point| {
        let c = u.cross(v);
        let eps = 1e-12 * u.norm() * v.norm();
        if c > eps {
            1
        } else if c < -eps {
            -1
        } else {
            0
        }
    };
    let da = a1 - a0;
    let db = b1 - b0;
    let s1 = sign(da, b0 - a0);
    let s2 = sign(da, b1 - a0);
    let s3 = sign(db, a0 - b0);
    let s4 = sign(db, a1 - b0);
    if s1 * s2 < 0 && s3 * s4 < 0 {
        return true;
    }
    // Point p (known to be on the line of [q, r]) lies within the segment.
    let within = |p: Point, q: Point, r: Point| {
        let d = r - q;
        let len_sq = d.norm_sq();
        if len_sq == 0.0 {
            return p.dist(q) <= 1e-12 * p.norm().max(1.0);
        }
        let s = (p - q).dot(d) / len_sq;
        (-1e-12..=1.0 + 1e-12).contains(&s)
    };
    (s1 == 0 && within(b0, a0, a1))
        || (s2 == 0 && within(b1, a0, a1))
        || (s3 == 0 && within(a0, b0, b1))
        || (s4 == 0 && within(a1, b0, b1))
}

/// Even-odd point-in-polygon test over a set of closed rings.
pub fn rings_contain(rings: &[Vec<Point>], p: Point) -> bool {
    let mut inside = false;
    for ring in rings {
        let n = ring.len();
        for i in 0..n {
            let a = ring[i];
            let b = ring[(i + 1) % n];
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if x > p.x {
                    inside = !inside;
                }
            }
        }
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_area_and_length() {
        let sq = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(1.0, 1.0), Point::new(0.0, 1.0)];
        assert_eq!(signed_area(&sq), 1.0);
        assert_eq!(loop_length(&sq), 4.0);
        let rev: Vec<_> = sq.iter().rev().copied().collect();
        assert_eq!(signed_area(&rev), -1.0);
    }

    #[test]
    fn segment_distances() {
        let d = segment_segment_distance(
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.5, 0.2),
            Point::new(0.5, 1.0),
        );
        assert!((d - 0.2).abs() < 1e-15);
        assert!(segments_intersect(
            Point::new(0.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
            Point::new(1.0, 0.0)
        ));
    }

    #[test]
    fn point_serializes_as_array() {
        let s = serde_json::to_string(&Point::new(1.5, -2.0)).unwrap();
        assert_eq!(s, "[1.5,-2.0]");
        let p: Point = serde_json::from_str("[3, 4]").unwrap();
        assert_eq!(p.norm(), 5.0);
    }
}
