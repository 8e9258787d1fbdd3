//! Sampled admissibility checks for strips: the curvature condition
//! `|κ|a ≤ 1` and injectivity of the tube map.

use serde::{Deserialize, Serialize};

use super::point::{segment_segment_distance, segments_intersect, Point};
use super::strip::{Strip, StripKind};

/// Outcome of [`check_admissible`]. Failures are carried in the report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub n_samples: usize,
    pub max_curvature_halfwidth: f64,
    pub curvature_ok: bool,
    /// Smallest distance between normal fibers `ℒ(qᵢ, [−a, a])` that are at
    /// least two sample spacings apart.
    pub min_fiber_distance: f64,
    /// Whether the sampled boundary of the tube is a simple curve (two
    /// disjoint simple loops for annuli).
    pub boundary_simple: bool,
    pub injective: bool,
    /// Arclength positions of a pair of samples witnessing non-injectivity.
    pub witness: Option<(f64, f64)>,
    pub threshold: f64,
}

impl AdmissibilityReport {
    pub fn passed(&self) -> bool {
        self.curvature_ok && self.injective
    }
}

/// Sampled admissibility test with `n_samples ≥ 16` base points.
///
/// Injectivity uses two sampled criteria: normal fibers of non-neighbouring
/// samples must stay more than `1e-6·a` apart, and the sampled tube boundary
/// must not self-intersect. The second catches overlaps of nearly parallel
/// fibers (such as the two arms of a hairpin) that the first misses between
/// samples.
pub fn check_admissible(strip: &Strip, n_samples: usize) -> AdmissibilityReport {
    let n = n_samples.max(16);
    let a = strip.halfwidth();
    let curve = strip.curve();
    let len = curve.length();
    let closed = strip.kind() == StripKind::Annulus;
    let qs: Vec<f64> = if closed {
        (0..n).map(|i| len * i as f64 / n as f64).collect()
    } else {
        (0..n).map(|i| len * i as f64 / (n - 1) as f64).collect()
    };
    let (klo, khi) = curve.curvature_domain();
    let mut max_ka = curve.max_abs_curvature() * a;
    for &q in &qs {
        max_ka = max_ka.max(curve.curvature_clamped(q.clamp(klo, khi)).abs() * a);
    }
    let threshold = 1e-6 * a;
    let lower: Vec<Point> = qs.iter().map(|&q| strip.tube_map_clamped(q, -a)).collect();
    let upper: Vec<Point> = qs.iter().map(|&q| strip.tube_map_clamped(q, a)).collect();

    let mut min_fiber = f64::INFINITY;
    let mut witness = None;
    for i in 0..n {
        for k in i + 2..n {
            if closed && i + n - k < 2 {
                continue;
            }
            let d = segment_segment_distance(lower[i], upper[i], lower[k], upper[k]);
            if d < min_fiber {
                min_fiber = d;
                if d <= threshold {
                    witness = Some((qs[i], qs[k]));
                }
            }
        }
    }
    let fibers_ok = min_fiber > threshold;

    let loops: Vec<Vec<Point>> = if closed {
        vec![lower.clone(), upper.clone()]
    } else {
        let mut ring = lower.clone();
        ring.extend(upper.iter().rev());
        vec![ring]
    };
    let boundary_simple = match first_crossing(&loops, threshold) {
        Some(pair) => {
            if witness.is_none() {
                witness = Some((qs[pair.0 % n], qs[pair.1 % n]));
            }
            false
        }
        None => true,
    };

    AdmissibilityReport {
        n_samples: n,
        max_curvature_halfwidth: max_ka,
        curvature_ok: max_ka <= 1.0 + 1e-12,
        min_fiber_distance: min_fiber,
        boundary_simple,
        injective: fibers_ok && boundary_simple,
        witness,
        threshold,
    }
}

/// First pair of non-adjacent boundary chords that intersect or come within
/// `threshold`, as indices into the loops' vertex lists.
fn first_crossing(loops: &[Vec<Point>], threshold: f64) -> Option<(usize, usize)> {
    struct Chord {
        a: Point,
        b: Point,
        loop_id: usize,
        idx: usize,
        len: usize,
    }
    let mut chords = Vec::new();
    for (li, ring) in loops.iter().enumerate() {
        let m = ring.len();
        for i in 0..m {
            chords.push(Chord { a: ring[i], b: ring[(i + 1) % m], loop_id: li, idx: i, len: m });
        }
    }
    let xmin = |c: &Chord| c.a.x.min(c.b.x);
    let mut order: Vec<usize> = (0..chords.len()).collect();
    order.sort_by(|&i, &j| xmin(&chords[i]).total_cmp(&xmin(&chords[j])));
    for (oi, &i) in order.iter().enumerate() {
        let c = &chords[i];
        let reach = c.a.x.max(c.b.x) + threshold;
        for &j in &order[oi + 1..] {
            let d = &chords[j];
            if xmin(d) > reach {
                break;
            }
            if c.loop_id == d.loop_id {
                let diff = c.idx.abs_diff(d.idx);
                if diff <= 1 || diff == c.len - 1 {
                    continue;
                }
            }
            if segments_intersect(c.a, c.b, d.a, d.b) || segment_segment_distance(c.a, c.b, d.a, d.b) <= threshold {
                return Some((c.idx, d.idx));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::curve::Curve;
    use std::f64::consts::PI;

    /// Hairpin: arm along y = 0 from x = 5 to 0, a half circle of radius
    /// `gap/2` through the left, and an arm along y = gap back to x = 5.
    fn hairpin(gap: f64) -> Curve {
        let r = gap / 2.0;
        let h = 0.05;
        let mut pts = Vec::new();
        let arm = (5.0 / h) as usize;
        for i in 0..arm {
            pts.push(Point::new(5.0 - i as f64 * h, 0.0));
        }
        let m = (PI * r / h).ceil() as usize;
        for i in 0..m {
            let th = -PI / 2.0 - PI * i as f64 / m as f64;
            pts.push(Point::new(r * th.cos(), r + r * th.sin()));
        }
        for i in 0..=arm {
            pts.push(Point::new(i as f64 * h, gap));
        }
        Curve::polyline(pts).unwrap()
    }

    #[test]
    fn circle_radius_two_passes() {
        let s = Strip::new(Curve::circle(Point::ORIGIN, 2.0).unwrap(), 1.0).unwrap();
        let rep = check_admissible(&s, 256);
        assert!((rep.max_curvature_halfwidth - 0.5).abs() < 1e-15);
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn circle_radius_one_wide_strip_fails() {
        let s = Strip::new(Curve::circle(Point::ORIGIN, 1.0).unwrap(), 1.5).unwrap();
        let rep = check_admissible(&s, 64);
        assert!((rep.max_curvature_halfwidth - 1.5).abs() < 1e-15);
        assert!(!rep.curvature_ok && !rep.passed());
    }

    #[test]
    fn hairpin_overlap_fails_injectivity() {
        let gap = 1.9;
        let s = Strip::new(hairpin(gap), 1.0).unwrap();
        // The point (3, 0.95) has two preimages: one over each arm.
        let target = Point::new(3.0, 0.95);
        let curve = s.curve();
        // Roots of the tangential residual q ↦ (target − γ(q))·T(q), refined
        // by bisection; a root with |t| ≤ a is a preimage.
        let resid = |q: f64| (target - curve.point(q).unwrap()).dot(curve.tangent(q).unwrap());
        let mut pre = Vec::new();
        let n = 4000;
        let qs: Vec<f64> = (0..=n).map(|i| curve.length() * i as f64 / n as f64).collect();
        for w in qs.windows(2) {
            let (mut lo, mut hi) = (w[0], w[1]);
            if resid(lo).signum() == resid(hi).signum() {
                continue;
            }
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if resid(mid).signum() == resid(lo).signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let p = curve.point(lo).unwrap();
            let nrm = curve.normal(lo).unwrap();
            let t = (target - p).dot(nrm);
            if t.abs() <= 1.0 && (p + nrm * t).dist(target) < 1e-9 {
                pre.push((lo, t));
            }
        }
        let arms: Vec<bool> = pre.iter().map(|&(q, _)| q < curve.length() / 2.0).collect();
        assert!(arms.contains(&true) && arms.contains(&false), "{pre:?}");
        let rep = check_admissible(&s, 512);
        assert!(!rep.injective, "{rep:?}");
        assert!(rep.witness.is_some());
    }

    #[test]
    fn wide_hairpin_is_injective() {
        let s = Strip::new(hairpin(3.0), 1.0).unwrap();
        let rep = check_admissible(&s, 512);
        assert!(rep.injective, "{rep:?}");
    }
}
