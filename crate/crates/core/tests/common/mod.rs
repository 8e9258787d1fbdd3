//! Random generators shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use cheeger_core::geometry::{check_admissible, CurveSpec};
use cheeger_core::strips::{PiecewiseLinear, Profile};
use cheeger_core::{Curve, Point, Strip};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Tangent-continuous arc spline starting at the origin heading along +x,
/// with every arc radius at least `min_radius`.
pub fn random_chain(rng: &mut ChaCha8Rng, min_radius: f64, scale: f64) -> Curve {
    loop {
        let n = rng.gen_range(2..=5);
        let mut p = Point::ORIGIN;
        let mut heading: f64 = 0.0;
        let mut pieces = Vec::new();
        let mut turning: f64 = 0.0;
        for _ in 0..n {
            if rng.gen_bool(0.35) {
                let len = rng.gen_range(0.3..2.0) * scale;
                let end = p + Point::polar(heading) * len;
                pieces.push(CurveSpec::Segment { start: p, end });
                p = end;
            } else {
                let radius = min_radius * rng.gen_range(1.0..4.0);
                let mut span = rng.gen_range(0.2..1.2) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                if (turning + span).abs() > 0.8 * PI {
                    span = -span;
                }
                turning += span;
                let normal = Point::polar(heading + PI / 2.0);
                let center = if span > 0.0 { p + normal * radius } else { p - normal * radius };
                let start_angle = (p - center).angle();
                let end = center + Point::polar(start_angle + span) * radius;
                pieces.push(CurveSpec::Arc { center, radius, start_angle, span });
                p = end;
                heading += span;
            }
        }
        if let Ok(c) = Curve::chain(pieces) {
            return c;
        }
    }
}

/// Finite admissible strip over a random arc spline, with `|κ|a ≤ 0.8`.
pub fn random_finite_strip(rng: &mut ChaCha8Rng) -> Strip {
    loop {
        let a = rng.gen_range(0.3..1.5);
        let curve = random_chain(rng, a / 0.8, 4.0 * a);
        if curve.length() < 2.0 * a {
            continue;
        }
        let strip = Strip::new(curve, a).unwrap();
        if check_admissible(&strip, 512).passed() {
            return strip;
        }
    }
}

/// Finite strip or, one time in four, an annulus about a circle.
pub fn random_strip(rng: &mut ChaCha8Rng) -> Strip {
    if rng.gen_bool(0.25) {
        let a = rng.gen_range(0.2..1.0);
        let radius = a / rng.gen_range(0.1..0.9);
        let ccw = rng.gen_bool(0.5);
        let curve = Curve::new(CurveSpec::Circle { center: Point::ORIGIN, radius, start_angle: 0.3, ccw }).unwrap();
        return Strip::new(curve, a).unwrap();
    }
    random_finite_strip(rng)
}

/// Star-shaped simple polygon inside `(0, |Γ|) × (−a, a)`, in `(q, t)`
/// coordinates.
pub fn random_polygon(rng: &mut ChaCha8Rng, strip: &Strip) -> Vec<Point> {
    let a = strip.halfwidth();
    let len = strip.curve().length();
    let qc = rng.gen_range(0.2..0.8) * len;
    let tc = rng.gen_range(-0.3..0.3) * a;
    let rq = rng.gen_range(0.2..0.95) * qc.min(len - qc);
    let rt = rng.gen_range(0.2..0.95) * (a - tc.abs());
    let n = rng.gen_range(5..16);
    // Jittered even spacing keeps every angular gap below π, so the polygon
    // stays star-shaped about its center and hence simple.
    let angles: Vec<f64> = (0..n).map(|k| 2.0 * PI * (k as f64 + rng.gen_range(0.0..0.8)) / n as f64).collect();
    angles
        .iter()
        .map(|&th| {
            let s = rng.gen_range(0.25..1.0);
            Point::new(qc + rq * s * th.cos(), tc + rt * s * th.sin())
        })
        .collect()
}

/// Random piecewise-linear profiles with jumps inside the band.
pub fn random_profile(rng: &mut ChaCha8Rng, strip: &Strip) -> Profile {
    let a = strip.halfwidth();
    let len = strip.curve().length();
    let full = strip.curve().is_closed() && rng.gen_bool(0.5);
    let (q0, q1) = if full {
        (0.0, len)
    } else {
        let u: f64 = rng.gen_range(0.0..0.6);
        (u * len, (u + rng.gen_range(0.1..0.4)) * len)
    };
    let n = rng.gen_range(2..12);
    let mut knots: Vec<f64> = (0..n - 2).map(|_| rng.gen_range(q0..q1)).collect();
    knots.push(q0);
    knots.push(q1);
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let side = |rng: &mut ChaCha8Rng| {
        let mid: f64 = rng.gen_range(-0.9..0.9) * a;
        let half = rng.gen_range(0.01..1.0) * (a - mid.abs());
        (mid - half, mid + half)
    };
    let m = knots.len();
    let (mut ll, mut lr, mut ul, mut ur) = (vec![0.0; m], vec![0.0; m], vec![0.0; m], vec![0.0; m]);
    for k in 0..m {
        let (lo, hi) = side(rng);
        ll[k] = lo;
        ul[k] = hi;
        if rng.gen_bool(0.3) {
            let (lo, hi) = side(rng);
            lr[k] = lo;
            ur[k] = hi;
        } else {
            lr[k] = lo;
            ur[k] = hi;
        }
    }
    Profile::new(PiecewiseLinear::new(knots.clone(), ll, lr).unwrap(), PiecewiseLinear::new(knots, ul, ur).unwrap())
        .unwrap()
}
