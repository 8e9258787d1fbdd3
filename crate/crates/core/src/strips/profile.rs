//! Profiles `f₋ ≤ f₊` in tube coordinates and the stripization `S*` of a
//! polygon: the set `{f₋(q) < t < f₊(q)}` between the extreme normal
//! offsets of the polygon over each base point.
//!
//! In tube coordinates the metric is `(1 − κt)² dq² + dt²`, so
//!
//! * `|S*| = ∫ (f₊ − f₋)(1 − κ(f₊ + f₋)/2) dq`,
//! * `P(S*) = Σ± ∫ √((1 − κf±)² + f±′²) dq + Σ|jumps| + end heights`.
//!
//! Profiles are piecewise linear with explicit jumps, so both integrals
//! split into pieces with smooth integrands (breaks at profile knots and at
//! curvature breaks of the base curve).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{point::segments_intersect, Curve, Point, Strip, StripKind};
use crate::quadrature::integrate;

/// Piecewise-linear function on `[knots[0], knots[n−1]]` with one-sided
/// values at each knot: linear from `right[i]` to `left[i+1]` on each
/// interval, with a jump at knot `i` when `left[i] ≠ right[i]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinear {
    pub knots: Vec<f64>,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn new(knots: Vec<f64>, left: Vec<f64>, right: Vec<f64>) -> Result<Self> {
        let n = knots.len();
        if n < 2 || left.len() != n || right.len() != n {
            return Err(Error::Validation(
                "piecewise-linear function needs matching lists of at least two knots".into(),
            ));
        }
        if !knots.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Validation("knots must be strictly increasing".into()));
        }
        if !knots.iter().chain(&left).chain(&right).all(|v| v.is_finite()) {
            return Err(Error::Validation("non-finite profile data".into()));
        }
        let mut f = PiecewiseLinear { knots, left, right };
        f.left[0] = f.right[0];
        f.right[n - 1] = f.left[n - 1];
        Ok(f)
    }

    /// Continuous function through `(q, value)` points.
    pub fn continuous(points: &[(f64, f64)]) -> Result<Self> {
        let knots = points.iter().map(|p| p.0).collect();
        let vals: Vec<f64> = points.iter().map(|p| p.1).collect();
        PiecewiseLinear::new(knots, vals.clone(), vals)
    }

    pub fn start(&self) -> f64 {
        self.knots[0]
    }

    pub fn end(&self) -> f64 {
        *self.knots.last().unwrap()
    }

    /// Jumps as `(position, left value, right value)`.
    pub fn jumps(&self) -> Vec<(f64, f64, f64)> {
        (1..self.knots.len() - 1)
            .filter(|&i| self.left[i] != self.right[i])
            .map(|i| (self.knots[i], self.left[i], self.right[i]))
            .collect()
    }

    /// Total variation: slopes times lengths plus jumps.
    pub fn total_variation(&self) -> f64 {
        let n = self.knots.len();
        let slopes: f64 = (0..n - 1).map(|i| (self.left[i + 1] - self.right[i]).abs()).sum();
        let jumps: f64 = (1..n - 1).map(|i| (self.left[i] - self.right[i]).abs()).sum();
        slopes + jumps
    }

    /// One-sided limits `(f(q−), f(q+))`.
    pub fn limits(&self, q: f64) -> (f64, f64) {
        match self.knots.binary_search_by(|k| k.total_cmp(&q)) {
            Ok(i) => (self.left[i], self.right[i]),
            Err(i) => {
                let i = i.clamp(1, self.knots.len() - 1);
                let (q0, q1) = (self.knots[i - 1], self.knots[i]);
                let v = self.right[i - 1] + (self.left[i] - self.right[i - 1]) * (q - q0) / (q1 - q0);
                (v, v)
            }
        }
    }

    /// `(f(u+), f(v−))` for `[u, v]` inside one linear piece.
    fn ends(&self, u: f64, v: f64) -> (f64, f64) {
        (self.limits(u).1, self.limits(v).0)
    }

    pub fn min(&self) -> f64 {
        self.left.iter().chain(&self.right).copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.left.iter().chain(&self.right).copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Deserialize)]
struct RawProfile {
    lower: PiecewiseLinear,
    upper: PiecewiseLinear,
}

/// Lower and upper profiles over a common interval `[q₀, q₁]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProfile")]
pub struct Profile {
    lower: PiecewiseLinear,
    upper: PiecewiseLinear,
}

impl TryFrom<RawProfile> for Profile {
    type Error = Error;

    fn try_from(raw: RawProfile) -> Result<Self> {
        Profile::new(raw.lower, raw.upper)
    }
}

impl Profile {
    pub fn new(lower: PiecewiseLinear, upper: PiecewiseLinear) -> Result<Self> {
        let lower = PiecewiseLinear::new(lower.knots, lower.left, lower.right)?;
        let upper = PiecewiseLinear::new(upper.knots, upper.left, upper.right)?;
        if lower.start() != upper.start() || lower.end() != upper.end() {
            return Err(Error::Validation("lower and upper profiles cover different intervals".into()));
        }
        let p = Profile { lower, upper };
        for q in p.knots() {
            let (l0, l1) = p.lower.limits(q);
            let (u0, u1) = p.upper.limits(q);
            if l0 > u0 || l1 > u1 {
                return Err(Error::Validation(format!("lower profile exceeds upper profile at q = {q}")));
            }
        }
        Ok(p)
    }

    pub fn lower(&self) -> &PiecewiseLinear {
        &self.lower
    }

    pub fn upper(&self) -> &PiecewiseLinear {
        &self.upper
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.lower.start(), self.lower.end())
    }

    /// Sorted union of the knots of both profiles.
    pub fn knots(&self) -> Vec<f64> {
        let mut k: Vec<f64> = self.lower.knots.iter().chain(&self.upper.knots).copied().collect();
        k.sort_by(f64::total_cmp);
        k.dedup();
        k
    }

    /// Check that the profile fits the strip: `−a ≤ f₋`, `f₊ ≤ a`, and
    /// `[q₀, q₁]` inside the base curve.
    pub fn check_in(&self, strip: &Strip) -> Result<()> {
        let a = strip.halfwidth();
        let slack = 1e-12 * a;
        if self.lower.min() < -a - slack || self.upper.max() > a + slack {
            return Err(Error::Validation(format!("profile leaves the band |t| ≤ {a}")));
        }
        let (q0, q1) = self.interval();
        let len = strip.curve().length();
        if q0 < -1e-12 * len || q1 > len * (1.0 + 1e-12) {
            return Err(Error::Validation(format!("profile interval [{q0}, {q1}] leaves [0, {len}]")));
        }
        Ok(())
    }
}

/// Curvature on `[u, v]` where it is linear: right limit at `u` and the
/// midpoint value determine it.
fn linear_curvature(curve: &Curve, u: f64, v: f64) -> impl Fn(f64) -> f64 {
    let ku = curve.curvature_clamped(u);
    let km = curve.curvature_clamped(0.5 * (u + v));
    let half = 0.5 * (v - u);
    move |q| ku + (km - ku) * (q - u) / half
}

/// Breaks of `[q0, q1]` at the given knots and the curvature breaks.
fn breakpoints(curve: &Curve, q0: f64, q1: f64, knots: &[f64]) -> Vec<f64> {
    let mut b: Vec<f64> =
        knots.iter().chain(&curve.curvature_breaks()).copied().filter(|&q| q > q0 && q < q1).collect();
    b.push(q0);
    b.push(q1);
    b.sort_by(f64::total_cmp);
    b.dedup();
    b
}

/// `(P(S*), |S*|)` for the region between the profiles.
pub fn profile_metrics(profile: &Profile, strip: &Strip) -> Result<(f64, f64)> {
    profile.check_in(strip)?;
    let curve = strip.curve();
    let (q0, q1) = profile.interval();
    let scale = strip.halfwidth().max(q1 - q0);
    let tol = 1e-15 * scale;
    let b = breakpoints(curve, q0, q1, &profile.knots());
    let (mut perim, mut area) = (0.0, 0.0);
    for w in b.windows(2) {
        let (u, v) = (w[0], w[1]);
        let kappa = linear_curvature(curve, u, v);
        let line = |f: &PiecewiseLinear| {
            let (fu, fv) = f.ends(u, v);
            let slope = (fv - fu) / (v - u);
            move |q: f64| (fu + slope * (q - u), slope)
        };
        let (lo, up) = (line(&profile.lower), line(&profile.upper));
        area += integrate(
            &|q| {
                let (m, p) = (lo(q).0, up(q).0);
                (p - m) * (1.0 - kappa(q) * 0.5 * (p + m))
            },
            u,
            v,
            tol,
        );
        for f in [&lo as &dyn Fn(f64) -> (f64, f64), &up] {
            perim += integrate(
                &|q| {
                    let (val, slope) = f(q);
                    (1.0 - kappa(q) * val).hypot(slope)
                },
                u,
                v,
                tol,
            );
        }
    }
    for f in [&profile.lower, &profile.upper] {
        perim += f.jumps().iter().map(|&(_, l, r)| (l - r).abs()).sum::<f64>();
    }
    let len = curve.length();
    let full_loop = strip.kind() == StripKind::Annulus && q0.abs() <= 1e-12 * len && (q1 - len).abs() <= 1e-12 * len;
    let (lo, up) = (&profile.lower, &profile.upper);
    let n_lo = lo.knots.len() - 1;
    let n_up = up.knots.len() - 1;
    if full_loop {
        // q₀ and q₁ are the same fiber: the seam contributes jumps only.
        perim += (lo.right[0] - lo.left[n_lo]).abs() + (up.right[0] - up.left[n_up]).abs();
    } else {
        perim += (up.right[0] - lo.right[0]) + (up.left[n_up] - lo.left[n_lo]);
    }
    Ok((perim, area))
}

/// `P(S*)/|S*|` for the region between the profiles.
pub fn profile_quotient(profile: &Profile, strip: &Strip) -> Result<f64> {
    let (p, a) = profile_metrics(profile, strip)?;
    if !(a > 0.0) {
        return Err(Error::Domain("profile encloses zero area".into()));
    }
    Ok(p / a)
}

/// Curved `(perimeter, area)` of a polygon given in `(q, t)` coordinates,
/// under the metric `(1 − κt)² dq² + dt²`. The area is
/// `∮ −(t − κt²/2) dq` up to orientation.
pub fn curved_polygon_metrics(polygon: &[Point], strip: &Strip) -> (f64, f64) {
    let curve = strip.curve();
    let scale = strip.halfwidth().max(curve.length());
    let tol = 1e-15 * scale;
    let breaks = curve.curvature_breaks();
    let n = polygon.len();
    let (mut perim, mut signed) = (0.0, 0.0);
    for i in 0..n {
        let (p0, p1) = (polygon[i], polygon[(i + 1) % n]);
        let d = p1 - p0;
        if d.x == 0.0 {
            perim += d.y.abs();
            continue;
        }
        // Split the edge where it crosses curvature breaks.
        let (qa, qb) = (p0.x.min(p1.x), p0.x.max(p1.x));
        let mut cuts: Vec<f64> = vec![0.0, 1.0];
        cuts.extend(breaks.iter().filter(|&&q| q > qa && q < qb).map(|&q| (q - p0.x) / d.x));
        cuts.sort_by(f64::total_cmp);
        for w in cuts.windows(2) {
            let (s0, s1) = (w[0], w[1]);
            let (u, v) = (p0.x + s0 * d.x, p0.x + s1 * d.x);
            let kappa = linear_curvature(curve, u.min(v), u.max(v));
            let at = |s: f64| (p0.x + s * d.x, p0.y + s * d.y);
            perim += integrate(
                &|s| {
                    let (q, t) = at(s);
                    ((1.0 - kappa(q) * t) * d.x).hypot(d.y)
                },
                s0,
                s1,
                tol,
            );
            signed += integrate(
                &|s| {
                    let (q, t) = at(s);
                    -(t - 0.5 * kappa(q) * t * t) * d.x
                },
                s0,
                s1,
                tol,
            );
        }
    }
    (perim, signed.abs())
}

/// Result of [`stripize`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StripizeReport {
    pub profile: Profile,
    pub star_perimeter: f64,
    pub star_area: f64,
    pub input_perimeter: f64,
    pub input_area: f64,
}

fn check_polygon(polygon: &[Point], strip: &Strip) -> Result<()> {
    let n = polygon.len();
    if n < 3 {
        return Err(Error::Validation("polygon needs at least three vertices".into()));
    }
    let a = strip.halfwidth();
    let len = strip.curve().length();
    for p in polygon {
        if !p.is_finite() || p.y.abs() >= a || p.x < 0.0 || p.x > len {
            return Err(Error::Validation(format!("vertex ({}, {}) is outside [0, {len}] × (−{a}, {a})", p.x, p.y)));
        }
    }
    for i in 0..n {
        let (a0, a1) = (polygon[i], polygon[(i + 1) % n]);
        if a0 == a1 {
            return Err(Error::Validation("polygon has a repeated vertex".into()));
        }
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (b0, b1) = (polygon[j], polygon[(j + 1) % n]);
            if segments_intersect(a0, a1, b0, b1) {
                return Err(Error::Validation(format!("polygon edges {i} and {j} intersect")));
            }
        }
    }
    Ok(())
}

/// Profiles of a simple polygon in `(q, t)` coordinates and the metrics of
/// its stripization and of the polygon itself.
///
/// Between consecutive vertex abscissae the set of edges crossing a fiber
/// is fixed and, the polygon being simple, their order is too; so `f₊` and
/// `f₋` are each a single edge there and the profiles are exact.
pub fn stripize(polygon: &[Point], strip: &Strip) -> Result<StripizeReport> {
    check_polygon(polygon, strip)?;
    let n = polygon.len();
    let mut knots: Vec<f64> = polygon.iter().map(|p| p.x).collect();
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    if knots.len() < 2 {
        return Err(Error::Validation("polygon has zero extent along the curve".into()));
    }
    let m = knots.len();
    let mut lo_l = vec![0.0; m];
    let mut lo_r = vec![0.0; m];
    let mut up_l = vec![0.0; m];
    let mut up_r = vec![0.0; m];
    for k in 0..m - 1 {
        let (u, v) = (knots[k], knots[k + 1]);
        let mid = 0.5 * (u + v);
        let mut top: Option<(f64, f64, f64)> = None;
        let mut bottom: Option<(f64, f64, f64)> = None;
        for i in 0..n {
            let (p0, p1) = (polygon[i], polygon[(i + 1) % n]);
            let (a, b) = if p0.x <= p1.x { (p0, p1) } else { (p1, p0) };
            if a.x > u || b.x < v {
                continue;
            }
            let eval = |q: f64| {
                if q == a.x {
                    a.y
                } else if q == b.x {
                    b.y
                } else {
                    a.y + (b.y - a.y) * (q - a.x) / (b.x - a.x)
                }
            };
            let vals = (eval(mid), eval(u), eval(v));
            if top.is_none_or(|t| vals.0 > t.0) {
                top = Some(vals);
            }
            if bottom.is_none_or(|t| vals.0 < t.0) {
                bottom = Some(vals);
            }
        }
        let (Some(top), Some(bottom)) = (top, bottom) else {
            return Err(Error::Internal(format!("no polygon edge spans [{u}, {v}]")));
        };
        up_r[k] = top.1;
        up_l[k + 1] = top.2;
        lo_r[k] = bottom.1;
        lo_l[k + 1] = bottom.2;
    }
    let profile =
        Profile::new(PiecewiseLinear::new(knots.clone(), lo_l, lo_r)?, PiecewiseLinear::new(knots, up_l, up_r)?)?;
    let (star_perimeter, star_area) = profile_metrics(&profile, strip)?;
    let (input_perimeter, input_area) = curved_polygon_metrics(polygon, strip);
    Ok(StripizeReport { profile, star_perimeter, star_area, input_perimeter, input_area })
}

/// Counterclockwise boundary polygon, in `(q, t)` coordinates, of the
/// region between the profiles. Jumps become vertical edges.
pub fn profile_polygon(profile: &Profile) -> Vec<Point> {
    let knots = profile.knots();
    let mut pts: Vec<Point> = Vec::new();
    let push = |p: Point, pts: &mut Vec<Point>| {
        if pts.last() != Some(&p) {
            pts.push(p);
        }
    };
    for &q in &knots {
        let (l, r) = profile.lower.limits(q);
        push(Point::new(q, l), &mut pts);
        push(Point::new(q, r), &mut pts);
    }
    for &q in knots.iter().rev() {
        let (l, r) = profile.upper.limits(q);
        push(Point::new(q, r), &mut pts);
        push(Point::new(q, l), &mut pts);
    }
    if pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{point::loop_length, point::signed_area, Curve};

    fn flat(len: f64, a: f64) -> Strip {
        Strip::new(Curve::segment(Point::ORIGIN, Point::new(len, 0.0)).unwrap(), a).unwrap()
    }

    fn band(q0: f64, q1: f64, lo: f64, hi: f64) -> Profile {
        Profile::new(
            PiecewiseLinear::continuous(&[(q0, lo), (q1, lo)]).unwrap(),
            PiecewiseLinear::continuous(&[(q0, hi), (q1, hi)]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn full_band_on_annulus() {
        let s = Strip::new(Curve::circle(Point::ORIGIN, 2.0).unwrap(), 1.0).unwrap();
        let len = s.curve().length();
        let q = profile_quotient(&band(0.0, len, -1.0, 1.0), &s).unwrap();
        assert!((q - 1.0).abs() < 1e-14);
    }

    #[test]
    fn half_band_on_flat_strip() {
        let (l, a) = (5.0, 0.8);
        let q = profile_quotient(&band(0.0, l, -a / 2.0, a / 2.0), &flat(l, a)).unwrap();
        assert!((q - (2.0 * l + 2.0 * a) / (a * l)).abs() < 1e-13);
    }

    #[test]
    fn rectangle_is_already_stripized() {
        let s = flat(6.0, 1.0 + 1e-9);
        let rect = [Point::new(0.0, -1.0), Point::new(6.0, -1.0), Point::new(6.0, 1.0), Point::new(0.0, 1.0)];
        let r = stripize(&rect, &s).unwrap();
        assert!((r.star_perimeter - 16.0).abs() < 1e-12 && (r.star_area - 12.0).abs() < 1e-12);
        assert!((r.input_perimeter - 16.0).abs() < 1e-12 && (r.input_area - 12.0).abs() < 1e-12);
    }

    #[test]
    fn l_shape_in_flat_strip() {
        let s = flat(4.0, 1.0);
        let l = [
            Point::new(0.5, -0.5),
            Point::new(3.0, -0.5),
            Point::new(3.0, 0.0),
            Point::new(1.5, 0.0),
            Point::new(1.5, 0.8),
            Point::new(0.5, 0.8),
        ];
        let r = stripize(&l, &s).unwrap();
        // Flat metric: direct shoelace and arclength.
        assert!((r.input_area - signed_area(&l).abs()).abs() < 1e-12);
        assert!((r.input_perimeter - loop_length(&l)).abs() < 1e-12);
        // Already monotone in t-extent: S* = S.
        assert!((r.star_area - r.input_area).abs() < 1e-12);
        assert!((r.star_perimeter - r.input_perimeter).abs() < 1e-12);
        assert_eq!(r.profile.upper().jumps(), vec![(1.5, 0.8, 0.0)]);
    }

    #[test]
    fn pocket_is_filled() {
        let s = flat(4.0, 1.0);
        // A C shape opening toward +q: fibers over (1, 3) cut it twice.
        let c = [
            Point::new(0.0, -0.5),
            Point::new(3.0, -0.5),
            Point::new(3.0, -0.2),
            Point::new(1.0, -0.2),
            Point::new(1.0, 0.2),
            Point::new(3.0, 0.2),
            Point::new(3.0, 0.5),
            Point::new(0.0, 0.5),
        ];
        let r = stripize(&c, &s).unwrap();
        assert!((r.input_area - 2.2).abs() < 1e-12);
        assert!((r.star_area - 3.0).abs() < 1e-12);
        assert!((r.input_perimeter - 12.0).abs() < 1e-12);
        assert!((r.star_perimeter - 8.0).abs() < 1e-12);
    }

    #[test]
    fn curved_sector_area() {
        // Annular sector between radii 3 and 5 over a quarter turn.
        let curve = Curve::arc(Point::ORIGIN, 4.0, 0.0, std::f64::consts::FRAC_PI_2).unwrap();
        let s = Strip::new(curve, 1.0).unwrap();
        let len = s.curve().length();
        let eps = 1e-13;
        let box_ = [
            Point::new(0.0, -1.0 + eps),
            Point::new(len, -1.0 + eps),
            Point::new(len, 1.0 - eps),
            Point::new(0.0, 1.0 - eps),
        ];
        let (p, a) = curved_polygon_metrics(&box_, &s);
        assert!((a - 4.0 * std::f64::consts::PI).abs() < 1e-10);
        assert!((p - (4.0 * std::f64::consts::PI + 4.0)).abs() < 1e-10);
    }

    #[test]
    fn profile_polygon_round_trip() {
        let s = flat(4.0, 1.0);
        let c = [
            Point::new(0.0, -0.5),
            Point::new(3.0, -0.5),
            Point::new(3.0, -0.2),
            Point::new(1.0, -0.2),
            Point::new(1.0, 0.2),
            Point::new(3.0, 0.2),
            Point::new(3.0, 0.7),
            Point::new(0.0, 0.5),
        ];
        let r = stripize(&c, &s).unwrap();
        let again = stripize(&profile_polygon(&r.profile), &s).unwrap();
        assert_eq!(again.profile, r.profile);
    }

    #[test]
    fn rejects_bad_input() {
        let s = flat(4.0, 1.0);
        let bow = [Point::new(0.0, 0.0), Point::new(1.0, 0.5), Point::new(1.0, 0.0), Point::new(0.0, 0.5)];
        assert!(stripize(&bow, &s).is_err());
        let out = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(1.0, 1.5)];
        assert!(stripize(&out, &s).is_err());
        let lo = PiecewiseLinear::continuous(&[(0.0, 0.5), (1.0, 0.5)]).unwrap();
        let hi = PiecewiseLinear::continuous(&[(0.0, 0.0), (1.0, 0.0)]).unwrap();
        assert!(Profile::new(lo, hi).is_err());
        assert!(matches!(profile_quotient(&band(0.0, 1.0, 0.2, 0.2), &s), Err(Error::Domain(_))));
    }
}
