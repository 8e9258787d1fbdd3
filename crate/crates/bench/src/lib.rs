//! Inputs shared by the benchmarks.

use cheeger_core::sectors::{sector_domain, SectorSpec};
use cheeger_core::{ArcPolygon, ConvexPolygon, Curve, CurveSpec, Point, Strip};

/// Regular `n`-gon of circumradius 1.
pub fn polygon(n: usize) -> ConvexPolygon {
    ConvexPolygon::regular(n, 1.0).expect("valid regular polygon")
}

/// Unit-radius sector of opening `alpha`.
pub fn sector(alpha: f64) -> ArcPolygon {
    sector_domain(SectorSpec::new(alpha, 1.0).expect("valid sector"))
}

/// Strip of half-width 1 around a quarter circle of radius 4.
pub fn bent_strip() -> Strip {
    let spec =
        CurveSpec::Arc { center: Point::ORIGIN, radius: 4.0, start_angle: 0.0, span: std::f64::consts::FRAC_PI_2 };
    Strip::new(Curve::new(spec).expect("valid arc"), 1.0).expect("admissible strip")
}

/// Comb in `(q, t)` coordinates of `strip`: a spine across the strip with
/// `teeth` bars running along it, so each fiber through the bars meets the
/// polygon in `teeth` pieces.
pub fn comb(strip: &Strip, teeth: usize) -> Vec<Point> {
    let len = strip.base_length().expect("bounded strip");
    let a = strip.halfwidth();
    let (q0, spine, q1) = (0.05 * len, 0.15 * len, 0.95 * len);
    let bar = 1.6 * a / (2 * teeth - 1) as f64;
    let p = Point::new;
    let mut pts = vec![p(q0, -0.8 * a)];
    for j in 0..teeth {
        let lo = -0.8 * a + 2.0 * j as f64 * bar;
        if j > 0 {
            pts.push(p(spine, lo));
        }
        pts.extend([p(q1, lo), p(q1, lo + bar)]);
        if j + 1 < teeth {
            pts.push(p(spine, lo + bar));
        }
    }
    pts.push(p(q0, 0.8 * a));
    pts
}
