//! Curved strips: tubular neighbourhoods `{γ(q) + t N(q) : |t| < a}`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::arcpolygon::{ArcPolygon, Edge};
use super::curve::{Curve, Piece};
use super::point::Point;
use crate::error::{domain, invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StripKind {
    /// Closed base curve.
    Annulus,
    /// Bounded open base curve.
    Finite,
    /// Base curve extends to infinity in one direction; the stored curve is
    /// a representative piece.
    SemiInfinite,
    /// Base curve extends to infinity in both directions.
    Infinite,
}

#[derive(Deserialize)]
struct RawStrip {
    curve: Curve,
    halfwidth: f64,
    #[serde(default)]
    kind: Option<StripKind>,
    #[serde(default)]
    truncation_length: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStrip")]
pub struct Strip {
    curve: Curve,
    halfwidth: f64,
    kind: StripKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    truncation_length: Option<f64>,
}

impl TryFrom<RawStrip> for Strip {
    type Error = Error;

    fn try_from(raw: RawStrip) -> Result<Self> {
        match raw.kind {
            None => Strip::new(raw.curve, raw.halfwidth),
            Some(kind) => Strip::with_kind(raw.curve, raw.halfwidth, kind, raw.truncation_length),
        }
    }
}

impl Strip {
    /// Bounded strip, classified from the curve: closed curves give
    /// annuli, open curves finite strips.
    pub fn new(curve: Curve, halfwidth: f64) -> Result<Self> {
        let kind = if curve.is_closed() { StripKind::Annulus } else { StripKind::Finite };
        Strip::with_kind(curve, halfwidth, kind, None)
    }

    pub fn with_kind(curve: Curve, halfwidth: f64, kind: StripKind, truncation_length: Option<f64>) -> Result<Self> {
        if !(halfwidth > 0.0 && halfwidth.is_finite()) {
            return invalid(format!("half-width must be positive, got {halfwidth}"));
        }
        match kind {
            StripKind::Annulus if !curve.is_closed() => return invalid("annulus requires a closed base curve"),
            StripKind::Finite | StripKind::SemiInfinite | StripKind::Infinite if curve.is_closed() => {
                return invalid("a closed base curve always gives an annulus")
            }
            _ => {}
        }
        match (kind, truncation_length) {
            (StripKind::Annulus | StripKind::Finite, Some(_)) => {
                return invalid("truncation length applies only to unbounded strips")
            }
            (_, Some(l)) if !(l > 0.0 && l.is_finite()) => {
                return invalid(format!("truncation length must be positive, got {l}"))
            }
            _ => {}
        }
        Ok(Strip { curve, halfwidth, kind, truncation_length })
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn halfwidth(&self) -> f64 {
        self.halfwidth
    }

    pub fn kind(&self) -> StripKind {
        self.kind
    }

    pub fn truncation_length(&self) -> Option<f64> {
        self.truncation_length
    }

    /// Length of the base curve used for metrics: the curve itself for
    /// bounded strips, `L` (semi-infinite) or `2L` (infinite) otherwise.
    pub fn base_length(&self) -> Result<f64> {
        match (self.kind, self.truncation_length) {
            (StripKind::Annulus | StripKind::Finite, _) => Ok(self.curve.length()),
            (StripKind::SemiInfinite, Some(l)) => Ok(l),
            (StripKind::Infinite, Some(l)) => Ok(2.0 * l),
            (_, None) => domain("unbounded strip needs a truncation length for metrics"),
        }
    }

    /// The tube map `ℒ(q, t) = γ(q) + t N(q)`.
    pub fn tube_map(&self, q: f64, t: f64) -> Result<Point> {
        if t.abs() > self.halfwidth * (1.0 + 1e-12) {
            return domain(format!("offset {t} exceeds half-width {}", self.halfwidth));
        }
        let p = self.curve.point(q)?;
        let n = self.curve.normal(q)?;
        Ok(p + n * t)
    }

    /// Tube map without range checks; `q` is clamped into the curve.
    pub fn tube_map_clamped(&self, q: f64, t: f64) -> Point {
        let (p, tan) = self.curve.frame_clamped(q);
        p + tan.perp() * t
    }

    /// Exact boundary of a bounded strip whose base curve consists of
    /// segments and arcs: the wall at `t = −a` forward, the end cap, the
    /// wall at `t = +a` backward and the start cap. Annuli give an outer
    /// loop and one hole.
    pub fn to_arcpolygon(&self) -> Result<ArcPolygon> {
        let pieces = match self.curve.pieces() {
            Some(p) => p,
            None => return domain("exact strip boundary needs a segment/arc base curve"),
        };
        let a = self.halfwidth;
        let lower: Vec<Edge> = pieces.iter().map(|p| offset_piece(p, -a)).collect::<Result<_>>()?;
        let upper: Vec<Edge> = pieces.iter().map(|p| offset_piece(p, a)).collect::<Result<_>>()?;
        match self.kind {
            StripKind::Annulus => {
                // With N to the left, the +a wall is the left side. For a
                // counterclockwise curve that side is inside, so the −a wall
                // runs counterclockwise outside.
                let (outer, inner) = if lower.iter().map(Edge::area_term).sum::<f64>() > 0.0 {
                    (lower, upper)
                } else {
                    (reverse_loop(&upper), reverse_loop(&lower))
                };
                let hole = reverse_loop(&inner);
                Ok(ArcPolygon::new_unchecked(outer, vec![hole]))
            }
            StripKind::Finite => {
                let mut edges = lower;
                let end = self.curve.length();
                edges.push(Edge::segment(self.tube_map_clamped(end, -a), self.tube_map_clamped(end, a)));
                edges.extend(reverse_loop(&upper));
                edges.push(Edge::segment(self.tube_map_clamped(0.0, a), self.tube_map_clamped(0.0, -a)));
                let shape = ArcPolygon::new_unchecked(edges, Vec::new());
                if shape.area() < 0.0 {
                    return Ok(ArcPolygon::new_unchecked(reverse_loop(shape.edges()), Vec::new()));
                }
                Ok(shape)
            }
            _ => domain("unbounded strips have no finite boundary"),
        }
    }
}

fn reverse_loop(edges: &[Edge]) -> Vec<Edge> {
    edges.iter().rev().map(Edge::reversed).collect()
}

/// The parallel curve of a piece at normal offset `t`.
fn offset_piece(piece: &Piece, t: f64) -> Result<Edge> {
    match *piece {
        Piece::Segment { start, end } => {
            let n = (end - start).normalized().perp();
            Ok(Edge::segment(start + n * t, end + n * t))
        }
        Piece::Arc { center, radius, start_angle, span } => {
            // N = −sign(span)·(radial unit), so the offset radius shrinks on
            // the side the curve bends to.
            let rho = radius - span.signum() * t;
            if rho <= 0.0 {
                return domain("offset arc degenerates: |κ|a ≥ 1");
            }
            let span = if span.abs() >= TAU { TAU.copysign(span) } else { span };
            Ok(Edge::arc(center, rho, start_angle, span))
        }
    }
}
