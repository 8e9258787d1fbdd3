//! Exact openings by corner rounding.
//!
//! For domains bounded by segments and arcs whose only obstruction to
//! rolling a disc of radius `r` along the inside of the boundary is at the
//! corners, the opening `(Ω ⊖ B_r) ⊕ B_r` replaces every corner of interior
//! angle below π by the radius-`r` arc tangent to both sides and keeps
//! everything else, reflex corners and slit tips included. The construction
//! verifies that assumption and reports failure otherwise.

use std::f64::consts::{PI, TAU};

use crate::geometry::{ArcPolygon, Edge, Point};

/// Why a corner-rounding construction did not produce a set.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum RoundingError {
    /// The construction's assumptions fail; the reason is attached.
    Failed(String),
}

const SMOOTH_TURN: f64 = 1e-9;
/// How far a tangency may slide along tangent-continuous neighbours.
const MAX_CHAIN_STEPS: usize = 8;

#[derive(Clone, Copy, Debug)]
enum Offset {
    Line { p: Point, d: Point },
    Circle { c: Point, rho: f64 },
}

/// Inward parallel of an edge at distance `r` (the interior is on the left).
fn offset(e: &Edge, r: f64) -> Option<Offset> {
    match *e {
        Edge::Segment { start, end, .. } => {
            let d = (end - start).normalized();
            Some(Offset::Line { p: start + d.perp() * r, d })
        }
        Edge::Arc { center, radius, span, .. } => {
            let rho = radius - span.signum() * r;
            (rho > 0.0).then_some(Offset::Circle { c: center, rho })
        }
    }
}

fn intersect(a: Offset, b: Offset) -> Vec<Point> {
    match (a, b) {
        (Offset::Line { p: p1, d: d1 }, Offset::Line { p: p2, d: d2 }) => {
            let den = d1.cross(d2);
            if den.abs() < 1e-14 {
                return Vec::new();
            }
            let s = d2.cross(p1 - p2) / den;
            vec![p1 + d1 * s]
        }
        (Offset::Line { p, d }, Offset::Circle { c, rho }) | (Offset::Circle { c, rho }, Offset::Line { p, d }) => {
            let s0 = (c - p).dot(d);
            let foot = p + d * s0;
            let h2 = rho * rho - foot.dist(c).powi(2);
            if h2 < -1e-14 * rho * rho {
                return Vec::new();
            }
            let h = h2.max(0.0).sqrt();
            vec![foot - d * h, foot + d * h]
        }
        (Offset::Circle { c: c1, rho: r1 }, Offset::Circle { c: c2, rho: r2 }) => {
            let dvec = c2 - c1;
            let dist = dvec.norm();
            if dist < 1e-14 * r1.max(r2) || dist > r1 + r2 || dist < (r1 - r2).abs() {
                return Vec::new();
            }
            let x = (dist * dist + r1 * r1 - r2 * r2) / (2.0 * dist);
            let y = (r1 * r1 - x * x).max(0.0).sqrt();
            let u = dvec * (1.0 / dist);
            let base = c1 + u * x;
            vec![base + u.perp() * y, base - u.perp() * y]
        }
    }
}

/// Arclength position of the foot of `c` on edge `e`, if it lies on the edge.
fn foot_param(e: &Edge, c: Point) -> Option<f64> {
    let len = e.length();
    let eps = 1e-12 * len.max(1.0);
    let s = match *e {
        Edge::Segment { start, end, .. } => (c - start).dot((end - start).normalized()),
        Edge::Arc { center, radius, start_angle, span, .. } => {
            let phi = (c - center).angle();
            let delta = (span.signum() * (phi - start_angle)).rem_euclid(TAU);
            // A foot just before the start wraps to ~2π; map it back.
            let delta = if delta > span.abs() + eps / radius && delta > TAU - 1e-9 { delta - TAU } else { delta };
            radius * delta
        }
    };
    (s >= -eps && s <= len + eps).then_some(s.clamp(0.0, len))
}

/// Signed turning angle at the junction from edge `a` into edge `b`.
fn turn(a: &Edge, b: &Edge) -> f64 {
    let t0 = a.end_tangent();
    let t1 = b.start_tangent();
    t0.cross(t1).atan2(t0.dot(t1))
}

#[derive(Clone, Copy, Debug)]
struct Cut {
    /// Global loop positions (unwrapped) of the two tangency points.
    u_in: f64,
    u_out: f64,
    center: Point,
    foot_in: Point,
    foot_out: Point,
}

/// Round all convex corners of every loop of `domain` with radius `r`.
pub(crate) fn round_corners(domain: &ArcPolygon, r: f64) -> Result<ArcPolygon, RoundingError> {
    let diam = domain.diameter();
    let mut loops_out = Vec::new();
    let mut centers = Vec::new();
    let mut kept_all: Vec<Edge> = Vec::new();
    for lp in domain.loops() {
        let (edges, kept, cuts) = round_loop(lp, r, diam)?;
        centers.extend(cuts.iter().map(|c| c.center));
        kept_all.extend(kept);
        loops_out.push(edges);
    }
    verify(domain, r, &centers, &kept_all)?;
    let mut it = loops_out.into_iter();
    let outer = it.next().unwrap_or_default();
    let shape = ArcPolygon::new_unchecked(outer, it.collect());
    let area = shape.area();
    if !(area > 0.0 && area <= domain.area() * (1.0 + 1e-12)) {
        return Err(RoundingError::Failed(format!("opened area {area} is not in (0, |Ω|]")));
    }
    Ok(shape)
}

type LoopOutput = (Vec<Edge>, Vec<Edge>, Vec<Cut>);

fn round_loop(lp: &[Edge], r: f64, diam: f64) -> Result<LoopOutput, RoundingError> {
    let m = lp.len();
    let mut starts = Vec::with_capacity(m + 1);
    let mut acc = 0.0;
    for e in lp {
        starts.push(acc);
        acc += e.length();
    }
    let total = acc;
    // Unwrapped global position of local arclength `s` on virtual edge `v`.
    let pos = |v: i64, s: f64| {
        let k = v.rem_euclid(m as i64) as usize;
        starts[k] + s + (v.div_euclid(m as i64) as f64) * total
    };
    let edge = |v: i64| &lp[v.rem_euclid(m as i64) as usize];
    let smooth = |v: i64| turn(edge(v - 1), edge(v)).abs() <= SMOOTH_TURN;

    let mut cuts = Vec::new();
    for j in 0..m as i64 {
        let tau = turn(edge(j), edge(j + 1));
        if !(tau > SMOOTH_TURN && tau < PI - SMOOTH_TURN) {
            continue;
        }
        let corner = edge(j).end();
        let mut best: Option<(f64, Cut)> = None;
        'search: for di in 0..MAX_CHAIN_STEPS as i64 {
            let k_in = j - di;
            if di > 0 && !smooth(k_in + 1) {
                break;
            }
            for dout in 0..MAX_CHAIN_STEPS as i64 {
                let k_out = j + 1 + dout;
                if dout > 0 && !smooth(k_out) {
                    break;
                }
                let (Some(oa), Some(ob)) = (offset(edge(k_in), r), offset(edge(k_out), r)) else {
                    continue;
                };
                for c in intersect(oa, ob) {
                    let (Some(s_in), Some(s_out)) = (foot_param(edge(k_in), c), foot_param(edge(k_out), c)) else {
                        continue;
                    };
                    let d = c.dist(corner);
                    if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                        best = Some((
                            d,
                            Cut {
                                u_in: pos(k_in, s_in),
                                u_out: pos(k_out, s_out),
                                center: c,
                                foot_in: edge(k_in).frame(s_in).0,
                                foot_out: edge(k_out).frame(s_out).0,
                            },
                        ));
                    }
                }
                if best.is_some() {
                    break 'search;
                }
            }
        }
        let Some((_, mut cut)) = best else {
            return Err(RoundingError::Failed(format!("no tangent circle of radius {r} at corner {j}")));
        };
        let shift = (cut.u_in / total).floor() * total;
        cut.u_in -= shift;
        cut.u_out -= shift;
        cuts.push(cut);
    }

    if cuts.is_empty() {
        return Ok((lp.to_vec(), lp.to_vec(), cuts));
    }
    cuts.sort_by(|a, b| a.u_in.total_cmp(&b.u_in));
    let tiny = 1e-12 * diam;
    let n = cuts.len();
    for i in 0..n {
        let next_in = if i + 1 < n { cuts[i + 1].u_in } else { cuts[0].u_in + total };
        if cuts[i].u_out > next_in + tiny || cuts[i].u_out <= cuts[i].u_in {
            return Err(RoundingError::Failed("rounding arcs overlap".into()));
        }
    }

    let min_len = 1e-13 * diam;
    let mut out = Vec::new();
    let mut kept = Vec::new();
    for i in 0..n {
        let a = cuts[i].u_out;
        let b = if i + 1 < n { cuts[i + 1].u_in } else { cuts[0].u_in + total };
        collect_kept(lp, &starts, total, a, b, min_len, &mut kept, &mut out);
        let nc = &cuts[(i + 1) % n];
        out.push(free_arc(nc, r));
    }
    Ok((out, kept, cuts))
}

/// Sub-edges of the loop between unwrapped positions `a < b`.
#[allow(clippy::too_many_arguments)]
fn collect_kept(
    lp: &[Edge],
    starts: &[f64],
    total: f64,
    a: f64,
    b: f64,
    min_len: f64,
    kept: &mut Vec<Edge>,
    out: &mut Vec<Edge>,
) {
    let m = lp.len();
    let lap0 = (a / total).floor() as i64;
    for lap in lap0..=lap0 + 1 {
        for k in 0..m {
            let base = starts[k] + lap as f64 * total;
            let len = lp[k].length();
            let lo = a.max(base);
            let hi = b.min(base + len);
            if hi - lo > min_len {
                let piece =
                    if lo - base <= 0.0 && base + len - hi <= 0.0 { lp[k] } else { lp[k].sub(lo - base, hi - base) };
                kept.push(piece);
                out.push(piece);
            }
        }
    }
}

fn free_arc(cut: &Cut, r: f64) -> Edge {
    let th_in = (cut.foot_in - cut.center).angle();
    let th_out = (cut.foot_out - cut.center).angle();
    let mut span = (th_out - th_in).rem_euclid(TAU);
    if span == 0.0 {
        span = TAU;
    }
    Edge::free_arc(cut.center, r, th_in, span)
}

/// Check the assumptions that make corner rounding the true opening.
fn verify(domain: &ArcPolygon, r: f64, centers: &[Point], kept: &[Edge]) -> Result<(), RoundingError> {
    let lower = r * (1.0 - 1e-9);
    for c in centers {
        let d = domain.distance_to_boundary(*c);
        if d < lower {
            return Err(RoundingError::Failed(format!("rounding disc at ({:.4}, {:.4}) leaves the domain", c.x, c.y)));
        }
    }
    for e in kept {
        if let Edge::Arc { radius, span, .. } = *e {
            if span > 0.0 && radius < lower {
                return Err(RoundingError::Failed(format!("kept convex arc of radius {radius} < r")));
            }
        }
        // Discs tangent from inside at sampled points must fit.
        let len = e.length();
        for k in 0..=6 {
            let (p, t) = e.frame(len * k as f64 / 6.0);
            let c = p + t.perp() * r;
            if domain.distance_to_boundary(c) < lower {
                return Err(RoundingError::Failed(format!(
                    "no disc of radius {r} fits at boundary point ({:.4}, {:.4})",
                    p.x, p.y
                )));
            }
        }
    }
    Ok(())
}
