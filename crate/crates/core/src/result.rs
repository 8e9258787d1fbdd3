use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ArcPolygon, Edge};

/// How a [`CheegerResult`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Bisection on `|Ω^r| = πr²` for a convex polygon.
    ConvexBisection,
    /// Closed-form rectangle solution.
    RectangleClosedForm,
    /// Closed curved strip: the strip itself is the Cheeger set.
    AnnulusExact,
    /// Unbounded strip: `h = 1/a`, not attained.
    UnboundedStrip,
    /// Minimum over an opening family built from exact arcs and segments.
    OpeningSweepExact,
    /// Minimum over an opening family evaluated on a raster.
    OpeningSweepGrid,
}

/// Cheeger constant with bounds and, when attained, a Cheeger set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheegerResult {
    pub h: f64,
    /// Radius of the free arcs, `1/h`, when a Cheeger set is reported.
    pub r_star: Option<f64>,
    pub cheeger_set: Option<ArcPolygon>,
    pub lower_bound: f64,
    pub upper_bound: f64,
    /// Dimensionless `k` in `h = 1/a + k/|Γ|` (rectangles, strips, sectors).
    pub k: Option<f64>,
    pub method: Method,
    /// Achieved tolerance in the solver's native variable.
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl CheegerResult {
    /// Check the structural invariants: bounds bracket `h`; a reported set
    /// has quotient `h`, satisfies `h·r* = 1`, and all its free arcs have
    /// radius `r*`.
    pub fn check(&self) -> Result<()> {
        let slack = 1e-12 * self.h.abs();
        if !(self.lower_bound <= self.h + slack && self.h <= self.upper_bound + slack) {
            return Err(Error::Internal(format!(
                "bounds [{}, {}] do not bracket h = {}",
                self.lower_bound, self.upper_bound, self.h
            )));
        }
        let Some(set) = &self.cheeger_set else {
            return Ok(());
        };
        let r = self.r_star.ok_or_else(|| Error::Internal("Cheeger set without r*".into()))?;
        if (self.h * r - 1.0).abs() > 1e-9 {
            return Err(Error::Internal(format!("h·r* = {} ≠ 1", self.h * r)));
        }
        let q = set.quotient();
        if (q - self.h).abs() > 1e-8 * self.h {
            return Err(Error::Internal(format!("P/A of the set is {q}, h is {}", self.h)));
        }
        for e in set.all_edges() {
            if let Edge::Arc { radius, free: true, .. } = *e {
                if (radius - r).abs() > 1e-9 * r.max(1.0) {
                    return Err(Error::Internal(format!("free arc of radius {radius} ≠ r* = {r}")));
                }
            }
        }
        Ok(())
    }
}
