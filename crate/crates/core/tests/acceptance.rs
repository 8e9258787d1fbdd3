//! Acceptance suite: one line per criterion, nonzero exit on any failure.

mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use cheeger_core::certificates::{builtin_normal_component, divergence_error, GridField};
use cheeger_core::opening::{sweep, SweepConfig};
use cheeger_core::sectors::{k_max_scan, sector_cheeger, table1, SectorOptions, SectorSpec};
use cheeger_core::strips::{profile_polygon, profile_quotient, stripize};
use cheeger_core::{certify_lower_bound, rectangle_h, solve_convex, strip_cheeger, ConvexPolygon, Method};
use cheeger_core::{Curve, Point, Strip};
use common::rng;
use rand::Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: f64, what: &str) -> Result<(), String> {
    check(elapsed.as_secs_f64() < limit, || format!("{what} took {:.1} s (limit {limit} s)", elapsed.as_secs_f64()))
}

fn table1_reproduction() -> Outcome {
    let start = Instant::now();
    let rows = table1(1e-8).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for r in &rows {
        let dh = (r.h - r.reference_h).abs();
        let dk = (r.k - r.reference_k).abs();
        worst = worst.max(dh);
        check(dh <= r.tolerance, || {
            format!("α = {}: h = {:.6} vs {} (tolerance {})", r.label, r.h, r.reference_h, r.tolerance)
        })?;
        check(dk <= r.tolerance * r.alpha, || format!("α = {}: k = {:.6} vs {}", r.label, r.k, r.reference_k))?;
        check((r.k - (r.h - 1.0) * r.alpha).abs() < 1e-12, || format!("α = {}: k inconsistent with h", r.label))?;
    }
    // The reported path also cross-checks α > π against the raster oracle.
    for frac in [1.5, 2.0] {
        let res = sector_cheeger(SectorSpec::new(frac * PI, 1.0).unwrap(), &SectorOptions::default())
            .map_err(|e| e.to_string())?;
        check(res.warnings.is_empty(), || format!("α = {frac}π: {:?}", res.warnings))?;
    }
    within(start.elapsed(), 120.0, "table")?;
    Ok(format!("7 rows, max |Δh| = {worst:.1e}, {:.2} s", start.elapsed().as_secs_f64()))
}

fn rectangle_cross_validation() -> Outcome {
    let start = Instant::now();
    let mut worst_convex: f64 = 0.0;
    let mut worst_sweep: f64 = 0.0;
    for (a, b) in [(1.0, 1.0), (1.0, 3.0), (1.0, 10.0)] {
        let exact = rectangle_h(a, b).map_err(|e| e.to_string())?.h;
        let poly = ConvexPolygon::rectangle(a, b).unwrap();
        let conv = solve_convex(&poly, None).map_err(|e| e.to_string())?.h;
        let sw = sweep(&poly.to_arcpolygon(), &SweepConfig::default()).map_err(|e| e.to_string())?.h;
        let (ec, es) = ((conv - exact).abs() / exact, (sw - exact).abs() / exact);
        worst_convex = worst_convex.max(ec);
        worst_sweep = worst_sweep.max(es);
        check(ec <= 1e-9, || format!("({a}, {b}): solve_convex relative error {ec:.1e}"))?;
        check(es <= 1e-6, || format!("({a}, {b}): sweep relative error {es:.1e}"))?;
    }
    within(start.elapsed(), 5.0, "rectangles")?;
    Ok(format!("convex {worst_convex:.1e}, sweep {worst_sweep:.1e} relative, {:.2} s", start.elapsed().as_secs_f64()))
}

fn rectangle_k(a: f64, b: f64) -> Result<f64, String> {
    // Computed k from the convex solver: h = 1/a + k/(2b).
    let res = solve_convex(&ConvexPolygon::rectangle(a, b).unwrap(), None).map_err(|e| e.to_string())?;
    Ok((res.h - 1.0 / a) * 2.0 * b)
}

fn rectangle_limits() -> Outcome {
    let long = rectangle_k(1.0, 1000.0)?;
    let flat = rectangle_k(1.0, 0.001)?;
    check((long - PI / 2.0).abs() <= 2e-3, || format!("k(1, 1000) = {long}"))?;
    check((flat - 2.0).abs() <= 1e-3, || format!("k(1, 0.001) = {flat}"))?;
    let ks: Vec<f64> =
        (0..100).map(|i| rectangle_h(1.0, 10f64.powf(-3.0 + 6.0 * i as f64 / 99.0)).unwrap().k.unwrap()).collect();
    let bad = ks.windows(2).position(|w| w[1] >= w[0]);
    check(bad.is_none(), || format!("k not decreasing at ratio index {:?}", bad))?;
    Ok(format!("k(1,1000) = {long:.6}, k(1,0.001) = {flat:.6}, 100 ratios decreasing"))
}

fn annulus_exactness() -> Outcome {
    let strip = Strip::new(Curve::circle(Point::ORIGIN, 2.0).unwrap(), 1.0).unwrap();
    let res = strip_cheeger(&strip).map_err(|e| e.to_string())?;
    check(res.h == 1.0, || format!("h = {}", res.h))?;
    check(res.method == Method::AnnulusExact, || format!("method {:?}", res.method))?;
    let whole = strip.to_arcpolygon().map_err(|e| e.to_string())?;
    check(res.cheeger_set.as_ref() == Some(&whole), || "Cheeger set is not the whole strip".into())?;
    let rings = whole.polygonize_rings(3.5e-9);
    let chords: usize = rings.iter().map(Vec::len).sum();
    let perim: f64 = rings.iter().map(|r| cheeger_core::geometry::point::loop_length(r)).sum();
    let area: f64 = rings.iter().map(|r| cheeger_core::geometry::point::signed_area(r)).sum();
    let q = perim / area;
    check(chords >= 100_000, || format!("only {chords} chords"))?;
    check((q - 1.0).abs() <= 1e-4, || format!("polygonized P/A = {q}"))?;
    Ok(format!("h = 1, set = whole strip, {chords} chords give P/A − 1 = {:.1e}", q - 1.0))
}

fn finite_strip_bracket() -> Outcome {
    let mut r = rng(5);
    let mut lines = Vec::new();
    for i in 0..10 {
        let strip = common::random_finite_strip(&mut r);
        let a = strip.halfwidth();
        let len = strip.curve().length();
        let domain = strip.to_arcpolygon().map_err(|e| e.to_string())?;
        let whole = domain.quotient();
        let upper = 1.0 / a + 2.0 / len;
        check((whole - upper).abs() <= 1e-10, || format!("strip {i}: whole quotient {whole} vs {upper}"))?;
        let r_max = domain.inradius().0.min(a);
        let res = sweep(&domain, &SweepConfig { tol: 1e-10 * a, r_max: Some(r_max), ..Default::default() })
            .map_err(|e| format!("strip {i}: {e}"))?;
        let lower = 1.0 / a + 1.0 / (400.0 * len);
        check(res.h >= lower - 1e-9 && res.h <= upper + 1e-6, || {
            format!("strip {i}: h = {} outside [{lower}, {upper}]", res.h)
        })?;
        lines.push((res.h - 1.0 / a) * len);
    }
    let (kmin, kmax) = lines.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &k| (lo.min(k), hi.max(k)));
    Ok(format!("10 strips inside the bracket, k = (h − 1/a)|Γ| ∈ [{kmin:.4}, {kmax:.4}]"))
}

fn stripization_suite() -> Outcome {
    let start = Instant::now();
    let mut r = rng(6);
    let mut worst_gain: f64 = f64::INFINITY;
    for i in 0..100 {
        let strip = common::random_strip(&mut r);
        let poly = common::random_polygon(&mut r, &strip);
        let rep = stripize(&poly, &strip).map_err(|e| format!("polygon {i}: {e}"))?;
        let scale = strip.halfwidth().max(strip.curve().length());
        let eps = 1e-8 * scale;
        check(rep.star_area >= rep.input_area - eps, || {
            format!("polygon {i}: |S*| = {} < |S| = {}", rep.star_area, rep.input_area)
        })?;
        check(rep.star_perimeter <= rep.input_perimeter + eps, || {
            format!("polygon {i}: P(S*) = {} > P(S) = {}", rep.star_perimeter, rep.input_perimeter)
        })?;
        worst_gain = worst_gain.min(rep.input_perimeter - rep.star_perimeter);
        let again =
            stripize(&profile_polygon(&rep.profile), &strip).map_err(|e| format!("polygon {i} (again): {e}"))?;
        let (p, q) = (rep.profile, again.profile);
        let same = |x: &[f64], y: &[f64]| x.len() == y.len() && x.iter().zip(y).all(|(u, v)| (u - v).abs() <= 1e-12);
        let ok = same(&p.lower().knots, &q.lower().knots)
            && same(&p.lower().left, &q.lower().left)
            && same(&p.lower().right, &q.lower().right)
            && same(&p.upper().left, &q.upper().left)
            && same(&p.upper().right, &q.upper().right);
        check(ok, || format!("polygon {i}: stripization is not idempotent"))?;
    }
    within(start.elapsed(), 30.0, "stripization suite")?;
    Ok(format!("100 polygons, min P(S) − P(S*) = {worst_gain:.1e}, idempotent, {:.2} s", start.elapsed().as_secs_f64()))
}

fn certificate_suite() -> Outcome {
    let mut r = rng(7);
    let mut worst_sup: f64 = 0.0;
    let mut ratios = Vec::new();
    for i in 0..20 {
        let strip = common::random_strip(&mut r);
        let a = strip.halfwidth();
        let field = GridField::builtin(&strip, 1024, 1024).map_err(|e| e.to_string())?;
        let rep = certify_lower_bound(&field, 1.0 / a, None, None).map_err(|e| e.to_string())?;
        check(rep.passed, || format!("strip {i}: {:?}", rep.failure))?;
        check(rep.sup_norm <= 1.0 + 1e-12, || format!("strip {i}: sup|V| = {}", rep.sup_norm))?;
        worst_sup = worst_sup.max(rep.sup_norm);
        if i < 5 {
            // Second order: a smooth perturbation with known divergence.
            let len = strip.curve().length();
            let w = 2.0 * PI / len;
            let eps = 0.1;
            let field_fn = |q: f64, t: f64, k: f64| {
                let vq = eps * (w * q).sin() * (PI * t / (2.0 * a)).cos();
                let vt = builtin_normal_component(k, a, t) + eps * (w * q).cos() * (PI * t / a).sin();
                (vq, vt)
            };
            let exact = |q: f64, t: f64, k: f64| {
                let jac = 1.0 - k * t;
                let dq = eps * w * (w * q).cos() * (PI * t / (2.0 * a)).cos();
                let extra = eps * (w * q).cos() * (PI * t / a).sin();
                let dt = -k * extra + jac * eps * (w * q).cos() * (PI / a) * (PI * t / a).cos();
                1.0 / a + (dq + dt) / jac
            };
            let coarse = GridField::from_fn(strip.clone(), 65, 65, field_fn).map_err(|e| e.to_string())?;
            let fine = GridField::from_fn(strip.clone(), 129, 129, field_fn).map_err(|e| e.to_string())?;
            let ratio = divergence_error(&coarse, exact) / divergence_error(&fine, exact);
            check(ratio >= 3.5, || format!("strip {i}: error ratio {ratio:.3} under grid doubling"))?;
            ratios.push(ratio);
        }
    }
    let rmin = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(format!("20 strips certified at 1/a, max sup|V| = {worst_sup:.15}, min error ratio {rmin:.3}"))
}

fn profile_lower_bound() -> Outcome {
    let mut r = rng(8);
    let mut worst: f64 = f64::INFINITY;
    for i in 0..200 {
        let strip = common::random_strip(&mut r);
        let a = strip.halfwidth();
        let prof = common::random_profile(&mut r, &strip);
        let q = profile_quotient(&prof, &strip).map_err(|e| format!("profile {i}: {e}"))?;
        let chain = 2.0 / (prof.upper().max() - prof.lower().min());
        check(q >= chain - 1e-9, || format!("profile {i}: quotient {q} below 2/(t₊ − t₋) = {chain}"))?;
        check(q >= 1.0 / a - 1e-9, || format!("profile {i}: quotient {q} below 1/a = {}", 1.0 / a))?;
        worst = worst.min(q * a);
    }
    Ok(format!("200 profiles, min quotient·a = {worst:.6}"))
}

fn monotonicity() -> Outcome {
    let mut r = rng(9);
    for i in 0..10 {
        let (oa, ob) = (r.gen_range(0.5..3.0), r.gen_range(0.5..3.0));
        let (ia, ib) = (oa * r.gen_range(0.3..1.0), ob * r.gen_range(0.3..1.0));
        let outer = solve_convex(&ConvexPolygon::rectangle(oa, ob).unwrap(), None).map_err(|e| e.to_string())?.h;
        let inner = solve_convex(&ConvexPolygon::rectangle(ia, ib).unwrap(), None).map_err(|e| e.to_string())?.h;
        check(inner >= outer, || format!("rectangle pair {i}: inner {inner} < outer {outer}"))?;
    }
    let opts = SectorOptions { cross_check: None, ..Default::default() };
    for i in 0..10 {
        let (oal, oa) = (r.gen_range(0.2..1.0) * 2.0 * PI, r.gen_range(0.5..2.0));
        let (ial, ia) = (oal * r.gen_range(0.3..1.0), oa * r.gen_range(0.3..1.0));
        let outer = sector_cheeger(SectorSpec::new(oal, oa).unwrap(), &opts).map_err(|e| e.to_string())?.h;
        let inner = sector_cheeger(SectorSpec::new(ial, ia).unwrap(), &opts).map_err(|e| e.to_string())?.h;
        check(inner >= outer, || format!("sector pair {i}: inner {inner} < outer {outer}"))?;
    }
    Ok("10 rectangle pairs and 10 sector pairs ordered".into())
}

fn disc_sanity() -> Outcome {
    let res = solve_convex(&ConvexPolygon::regular(720, 1.0).unwrap(), None).map_err(|e| e.to_string())?;
    let r = res.r_star.unwrap();
    check((res.h - 2.0).abs() <= 5e-4, || format!("h = {}", res.h))?;
    check((r - 0.5).abs() <= 2.5e-4, || format!("r* = {r}"))?;
    Ok(format!("h = {:.8}, r* = {r:.8}", res.h))
}

fn k_max() -> Outcome {
    let start = Instant::now();
    let km = k_max_scan(1.0, 64, 1e-6).map_err(|e| e.to_string())?;
    check((km.alpha - 0.656749 * PI).abs() <= 0.01 * PI, || format!("maximizer {}π", km.alpha / PI))?;
    check((km.k - 1.83856).abs() <= 5e-4, || format!("maximum {}", km.k))?;
    Ok(format!("α* = {:.6}π, k* = {:.6}, {:.2} s", km.alpha / PI, km.k, start.elapsed().as_secs_f64()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("sector table reproduction", table1_reproduction),
        ("rectangle cross-validation", rectangle_cross_validation),
        ("rectangle limits", rectangle_limits),
        ("annulus exactness", annulus_exactness),
        ("finite strip bracket", finite_strip_bracket),
        ("stripization properties", stripization_suite),
        ("vector-field certificates", certificate_suite),
        ("profile quotient lower bound", profile_lower_bound),
        ("domain monotonicity", monotonicity),
        ("disc sanity", disc_sanity),
        ("k-max scan", k_max),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", n + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", n + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
