use std::f64::consts::PI;

use cheeger_core::convex::{inner_parallel_area, rectangle_h};
use cheeger_core::geometry::point::{loop_length, signed_area};
use cheeger_core::strips::stripize;
use cheeger_core::{solve_convex, ArcPolygon, ConvexPolygon, Curve, Point, Strip};
use proptest::prelude::*;

/// Convex polygon from sorted random angles on an ellipse.
fn convex_polygon() -> impl Strategy<Value = ConvexPolygon> {
    (prop::collection::vec(0.0..1.0f64, 3..12), 0.3..3.0f64, 0.3..3.0f64).prop_filter_map(
        "degenerate",
        |(u, rx, ry)| {
            let mut th: Vec<f64> = u.iter().map(|x| x * 2.0 * PI).collect();
            th.sort_by(f64::total_cmp);
            th.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
            let pts: Vec<Point> = th.iter().map(|t| Point::new(rx * t.cos(), ry * t.sin())).collect();
            ConvexPolygon::new(pts).ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn convex_result_is_consistent(poly in convex_polygon()) {
        let res = solve_convex(&poly, None).unwrap();
        res.check().unwrap();
        let r = res.r_star.unwrap();
        prop_assert!((inner_parallel_area(&poly, r) - PI * r * r).abs() < 1e-9 * poly.area());
        let set = res.cheeger_set.unwrap();
        prop_assert!(set.area() <= poly.area() * (1.0 + 1e-12));
    }

    #[test]
    fn convex_scaling(poly in convex_polygon(), s in 0.1..10.0f64) {
        let h = solve_convex(&poly, None).unwrap().h;
        let hs = solve_convex(&poly.scaled(s).unwrap(), None).unwrap().h;
        prop_assert!((hs * s - h).abs() < 1e-9 * h);
    }

    #[test]
    fn inner_parallel_area_decreases(poly in convex_polygon(), r1 in 0.0..1.0f64, r2 in 0.0..1.0f64) {
        let (lo, hi) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
        prop_assert!(inner_parallel_area(&poly, hi) <= inner_parallel_area(&poly, lo) + 1e-12);
    }

    #[test]
    fn rectangles_agree(a in 0.01..100.0f64, b in 0.01..100.0f64) {
        let exact = rectangle_h(a, b).unwrap();
        let conv = solve_convex(&ConvexPolygon::rectangle(a, b).unwrap(), None).unwrap();
        prop_assert!((exact.h - conv.h).abs() <= 1e-9 * exact.h);
        let k = exact.k.unwrap();
        prop_assert!((exact.h - (1.0 / a + k / (2.0 * b))).abs() < 1e-9 * exact.h);
    }

    #[test]
    fn flat_stripization_matches_plane_geometry(
        raw in prop::collection::vec((0.0..1.0f64, 0.3..1.0f64), 5..14),
        qc in 2.0..4.0f64,
        tc in -0.3..0.3f64,
    ) {
        let strip = Strip::new(Curve::segment(Point::ORIGIN, Point::new(6.0, 0.0)).unwrap(), 1.0).unwrap();
        let n = raw.len();
        let poly: Vec<Point> = raw.iter().enumerate().map(|(k, &(j, s))| {
            let th = 2.0 * PI * (k as f64 + 0.8 * j) / n as f64;
            Point::new(qc + 1.5 * s * th.cos(), tc + 0.6 * s * th.sin())
        }).collect();
        let rep = stripize(&poly, &strip).unwrap();
        prop_assert!((rep.input_area - signed_area(&poly).abs()).abs() < 1e-12);
        prop_assert!((rep.input_perimeter - loop_length(&poly)).abs() < 1e-12);
        prop_assert!(rep.star_area >= rep.input_area - 1e-12);
        prop_assert!(rep.star_perimeter <= rep.input_perimeter + 1e-12);
    }

    #[test]
    fn arcpolygon_json_round_trip(poly in convex_polygon()) {
        let set = solve_convex(&poly, None).unwrap().cheeger_set.unwrap();
        let json = serde_json::to_string(&set).unwrap();
        let back: ArcPolygon = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, set);
    }
}
