mod common;

use std::f64::consts::PI;

use cheeger_core::sectors::{
    sector_cheeger, sector_domain, table1, write_table1_csv, SectorMethod, SectorOptions, SectorSpec,
};
use cheeger_core::strips::{
    finite_bracket, profile_quotient, strip_area_perimeter, strip_cheeger, PiecewiseLinear, Profile,
};
use cheeger_core::{solve_convex, ConvexPolygon, Method, Point};
use common::rng;

#[test]
fn convex_sectors_match_polygonization() {
    for frac in [0.1, 0.5, 0.75, 1.0] {
        let alpha = frac * PI;
        let spec = SectorSpec::new(alpha, 1.0).unwrap();
        let h = sector_cheeger(spec, &SectorOptions::default()).unwrap().h;
        let mut pts = vec![Point::ORIGIN];
        pts.extend((0..4095).map(|i| Point::polar(alpha * i as f64 / 4094.0) * 2.0));
        let poly = ConvexPolygon::new(pts).unwrap();
        let hp = solve_convex(&poly, None).unwrap().h;
        assert!((h - hp).abs() < 5e-4, "α = {frac}π: {h} vs {hp}");
    }
}

#[test]
fn sector_bounds_and_ordering() {
    let rows = table1(1e-8).unwrap();
    for r in &rows {
        assert!(r.h > 1.0 && r.h <= 1.0 + 2.0 / r.alpha + 5e-3, "α = {}: h = {}", r.label, r.h);
        assert!(!r.deviates, "{} deviates", r.label);
    }
    assert!(rows.windows(2).all(|w| w[1].h < w[0].h));
    let mut buf = Vec::new();
    write_table1_csv(&rows, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), 8);
    assert!(text.contains("pi/10,0.314159,5.92687,1.54782"));
}

#[test]
fn sector_grid_method() {
    let opts = SectorOptions { method: SectorMethod::Grid, ..Default::default() };
    let r = sector_cheeger(SectorSpec::new(PI / 2.0, 1.0).unwrap(), &opts).unwrap();
    assert_eq!(r.method, Method::OpeningSweepGrid);
    assert!((r.h - 2.16358).abs() < 2e-3, "h = {}", r.h);
    assert!(r.cheeger_set.is_none());
}

#[test]
fn slit_disc_set_keeps_the_slit() {
    let spec = SectorSpec::new(2.0 * PI, 1.0).unwrap();
    let r = sector_cheeger(spec, &SectorOptions::default()).unwrap();
    r.check().unwrap();
    let set = r.cheeger_set.unwrap();
    // Both slit sides survive up to the center.
    let on_slit = set.edges().iter().filter(|e| e.start().y.abs() < 1e-12 && e.end().y.abs() < 1e-12).count();
    assert_eq!(on_slit, 2);
    assert!(set.area() < sector_domain(spec).area());
}

#[test]
fn finite_strips_inside_bracket() {
    let mut r = rng(21);
    for _ in 0..4 {
        let strip = common::random_finite_strip(&mut r);
        let res = strip_cheeger(&strip).unwrap();
        let (lo, hi) = finite_bracket(strip.halfwidth(), strip.curve().length());
        assert!(lo <= res.h && res.h <= hi);
        res.check().unwrap();
        let (p, a) = strip_area_perimeter(&strip).unwrap();
        assert!((p / a - hi).abs() < 1e-12);
    }
}

#[test]
fn lower_bound_chain_holds() {
    let mut r = rng(22);
    for _ in 0..100 {
        let strip = common::random_strip(&mut r);
        let prof = common::random_profile(&mut r, &strip);
        let q = profile_quotient(&prof, &strip).unwrap();
        let spread = prof.upper().max() - prof.lower().min();
        assert!(q >= 2.0 / spread - 1e-9 && 2.0 / spread >= 1.0 / strip.halfwidth() - 1e-12);
    }
}

#[test]
fn profile_json_round_trip() {
    let p = Profile::new(
        PiecewiseLinear::new(vec![0.0, 0.5, 1.0], vec![-0.2, -0.2, 0.1], vec![-0.2, 0.0, 0.1]).unwrap(),
        PiecewiseLinear::continuous(&[(0.0, 0.3), (1.0, 0.4)]).unwrap(),
    )
    .unwrap();
    let s = serde_json::to_string(&p).unwrap();
    assert_eq!(serde_json::from_str::<Profile>(&s).unwrap(), p);
    let bad = s.replace("0.3", "-0.9");
    assert!(serde_json::from_str::<Profile>(&bad).is_err());
}
