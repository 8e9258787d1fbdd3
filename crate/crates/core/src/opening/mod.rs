//! Cheeger-set search over morphological opening families
//! `S_r = (Ω ⊖ B_r) ⊕ B_r`.
//!
//! The quotient `Q(r) = P(S_r)/|S_r|` is scanned on a uniform grid of
//! radii, refined by golden-section around the coarse minimum and then
//! polished with the stationarity condition `Q(r̂) = 1/r̂`, which a
//! minimizer of the family satisfies (its free arcs have curvature `h`).

pub mod grid;
pub mod richardson;
mod rounding;

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convex::{minkowski_disc, ConvexPolygon};
use crate::error::{Error, Result};
use crate::geometry::{ArcPolygon, Edge};
use crate::optimize::{bisect, golden_section};
use grid::{GridDomain, GridMetrics};
use richardson::{richardson, Extrapolation};
use rounding::{round_corners, RoundingError};

/// Default raster resolution for grid fallbacks and cross-checks.
pub const DEFAULT_GRID_RESOLUTION: usize = 2048;

/// One member of an opening family.
#[derive(Clone, Debug, PartialEq)]
pub enum OpenedSet {
    /// `r` is at least the inradius: the erosion is empty.
    Empty,
    Exact(ArcPolygon),
    /// Exact construction failed and the raster oracle was used instead.
    Grid {
        metrics: GridMetrics,
        warning: String,
    },
    /// Exact construction failed and no fallback was requested.
    Failed(String),
}

impl OpenedSet {
    pub fn metrics(&self) -> Option<(f64, f64)> {
        match self {
            OpenedSet::Exact(s) => Some(s.metrics()),
            OpenedSet::Grid { metrics, .. } => Some((metrics.perimeter, metrics.area)),
            _ => None,
        }
    }

    /// `P/A`, or `+∞` when there is no set.
    pub fn quotient(&self) -> f64 {
        self.metrics().map_or(f64::INFINITY, |(p, a)| p / a)
    }
}

/// The domain as a convex polygon when it is one (a single loop of segments
/// turning left at every vertex).
fn as_convex(domain: &ArcPolygon) -> Option<ConvexPolygon> {
    if !domain.holes().is_empty() {
        return None;
    }
    let edges = domain.edges();
    if edges.len() < 3 || !edges.iter().all(|e| matches!(e, Edge::Segment { .. })) {
        return None;
    }
    let n = edges.len();
    for i in 0..n {
        let t0 = edges[i].end_tangent();
        let t1 = edges[(i + 1) % n].start_tangent();
        if t0.cross(t1) <= 0.0 {
            return None;
        }
    }
    ConvexPolygon::new(edges.iter().map(Edge::start).collect()).ok()
}

/// Opening of `domain` by the disc of radius `r`, with exact boundary when
/// the corner-rounding construction applies and the raster oracle at
/// [`DEFAULT_GRID_RESOLUTION`] otherwise (with a warning).
pub fn opening_exact(domain: &ArcPolygon, r: f64) -> Result<OpenedSet> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("opening radius must be positive, got {r}")));
    }
    let inradius = match as_convex(domain) {
        Some(_) => f64::INFINITY,
        None => domain.inradius().0,
    };
    Ok(open_with(domain, r, inradius, Some(DEFAULT_GRID_RESOLUTION)))
}

pub(crate) fn open_with(domain: &ArcPolygon, r: f64, inradius: f64, fallback: Option<usize>) -> OpenedSet {
    if let Some(poly) = as_convex(domain) {
        return match poly.inset(r) {
            None => OpenedSet::Empty,
            Some(inset) => OpenedSet::Exact(minkowski_disc(&poly, &inset, r)),
        };
    }
    if r >= inradius {
        return OpenedSet::Empty;
    }
    match round_corners(domain, r) {
        Ok(shape) => OpenedSet::Exact(shape),
        Err(RoundingError::Failed(why)) => match fallback {
            None => OpenedSet::Failed(why),
            Some(res) => match GridDomain::from_arcpolygon(domain, res).ok().and_then(|g| g.opening(r)) {
                Some(metrics) => OpenedSet::Grid {
                    metrics,
                    warning: format!("exact opening failed ({why}); raster fallback at resolution {res}"),
                },
                None => OpenedSet::Empty,
            },
        },
    }
}

/// Parameters of [`sweep`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Number of uniformly spaced radii in `(0, r_max)`.
    pub n_coarse: usize,
    /// Golden-section stopping width in `r`.
    pub tol: f64,
    /// Upper end of the radius range; the numerical inradius when absent.
    pub r_max: Option<f64>,
    /// Raster resolution used when exact openings fail; `None` skips them.
    pub grid_fallback: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { n_coarse: 256, tol: 1e-10, r_max: None, grid_fallback: None }
    }
}

/// Outcome of an opening sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpeningSweepResult {
    pub r_grid: Vec<f64>,
    /// `P(S_r)/|S_r|` on `r_grid`; `+∞` (serialized as null) where the
    /// opening is empty or could not be built.
    pub quotients: Vec<Option<f64>>,
    /// Local minima of the coarse scan as `(r, quotient)`.
    pub coarse_minima: Vec<(f64, f64)>,
    pub golden_r: f64,
    pub golden_quotient: f64,
    /// Minimizing radius after refinement.
    pub r_hat: f64,
    /// Minimum quotient: the Cheeger constant estimate.
    pub h: f64,
    pub r_max: f64,
    /// Winning set when built exactly.
    pub set: Option<ArcPolygon>,
    /// Winning metrics when the raster fallback was used.
    pub grid_metrics: Option<GridMetrics>,
    pub warnings: Vec<String>,
}

impl OpeningSweepResult {
    /// `(r, quotient)` curve as CSV.
    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        let err = |e: csv::Error| Error::Internal(format!("CSV output failed: {e}"));
        wtr.write_record(["r", "quotient"]).map_err(err)?;
        for (r, q) in self.r_grid.iter().zip(&self.quotients) {
            let q = q.map_or(String::new(), |q| q.to_string());
            wtr.write_record([r.to_string(), q]).map_err(err)?;
        }
        wtr.flush().map_err(|e| Error::Internal(format!("CSV output failed: {e}")))
    }
}

/// Minimize `P(S_r)/|S_r|` over the opening family of `domain`.
pub fn sweep(domain: &ArcPolygon, config: &SweepConfig) -> Result<OpeningSweepResult> {
    if config.n_coarse < 16 {
        return Err(Error::Domain(format!("n_coarse must be at least 16, got {}", config.n_coarse)));
    }
    if !(config.tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {}", config.tol)));
    }
    let convex = as_convex(domain).is_some();
    let r_max = match (config.r_max, convex) {
        (Some(r), _) => r,
        (None, true) => {
            crate::optimize::bisect(
                |r| {
                    if as_convex(domain).and_then(|p| p.inset(r)).is_some() {
                        1.0
                    } else {
                        -1.0
                    }
                },
                0.0,
                domain.diameter(),
                1e-14 * domain.diameter(),
            )?
            .1
        }
        (None, false) => domain.inradius().0,
    };
    let inradius = if convex { f64::INFINITY } else { r_max };
    let eval = |r: f64| open_with(domain, r, inradius, config.grid_fallback);
    let quotient = |r: f64| eval(r).quotient();

    let n = config.n_coarse;
    let r_grid: Vec<f64> = (1..=n).map(|i| r_max * i as f64 / (n + 1) as f64).collect();
    let opened: Vec<OpenedSet> = r_grid.par_iter().map(|&r| eval(r)).collect();
    let qs: Vec<f64> = opened.iter().map(OpenedSet::quotient).collect();
    let mut warnings = Vec::new();
    let failed = opened.iter().filter(|o| matches!(o, OpenedSet::Failed(_))).count();
    let fellback = opened.iter().filter(|o| matches!(o, OpenedSet::Grid { .. })).count();
    if failed > 0 {
        warnings.push(format!("{failed} of {n} coarse openings could not be built exactly and were skipped"));
    }
    if fellback > 0 {
        warnings.push(format!("{fellback} of {n} coarse openings used the raster fallback"));
    }

    let mut best: Option<usize> = None;
    for (i, &q) in qs.iter().enumerate() {
        if q.is_finite() && best.is_none_or(|b| q <= qs[b]) {
            best = Some(i);
        }
    }
    let Some(ib) = best else {
        return Err(Error::Domain("every opening in the scan is empty or failed".into()));
    };
    let coarse_minima: Vec<(f64, f64)> = (0..n)
        .filter(|&i| {
            let q = qs[i];
            let left = if i > 0 { qs[i - 1] } else { f64::INFINITY };
            let right = if i + 1 < n { qs[i + 1] } else { f64::INFINITY };
            q.is_finite() && q <= left && q <= right && (q < left || q < right)
        })
        .map(|i| (r_grid[i], qs[i]))
        .collect();
    if coarse_minima.len() > 1 {
        warnings.push(format!("coarse scan has {} local minima", coarse_minima.len()));
    }

    let lo = if ib > 0 { r_grid[ib - 1] } else { 0.5 * r_grid[0] };
    let hi = if ib + 1 < n { r_grid[ib + 1] } else { 0.5 * (r_grid[n - 1] + r_max) };
    let (golden_r, golden_q) = golden_section(quotient, lo, hi, config.tol);

    // Polish with the stationarity condition Q(r)·r = 1.
    let mut r_hat = golden_r;
    let mut h = golden_q;
    let phi = |r: f64| {
        let q = quotient(r);
        if q.is_finite() {
            q * r - 1.0
        } else {
            f64::NAN
        }
    };
    let (pl, ph) = (phi(lo), phi(hi));
    if pl.is_finite() && ph.is_finite() && pl * ph < 0.0 {
        if let Ok((a, b)) = bisect(phi, lo, hi, 1e-15 * r_max) {
            let rp = 0.5 * (a + b);
            let qp = quotient(rp);
            if qp <= golden_q * (1.0 + 1e-12) {
                r_hat = rp;
                h = qp;
            }
        }
    }
    if qs[ib] < h {
        r_hat = r_grid[ib];
        h = qs[ib];
    }

    let (set, grid_metrics) = match eval(r_hat) {
        OpenedSet::Exact(s) => (Some(s), None),
        OpenedSet::Grid { metrics, warning } => {
            warnings.push(warning);
            (None, Some(metrics))
        }
        _ => (None, None),
    };
    Ok(OpeningSweepResult {
        r_grid,
        quotients: qs.iter().map(|&q| q.is_finite().then_some(q)).collect(),
        coarse_minima,
        golden_r,
        golden_quotient: golden_q,
        r_hat,
        h,
        r_max,
        set,
        grid_metrics,
        warnings,
    })
}

/// Minimum of the raster quotient at one resolution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridLevel {
    pub resolution: usize,
    pub r_hat: f64,
    pub quotient: f64,
}

/// Raster sweep at three resolutions with Richardson extrapolation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSweepResult {
    pub levels: Vec<GridLevel>,
    pub extrapolation: Extrapolation,
}

/// Minimize the raster opening quotient at `base`, `2·base` and `4·base`.
/// The coarsest level scans `n_coarse` radii in `(0, r_max)`; finer levels
/// refine within a few pixels of the previous minimizer.
pub fn grid_sweep(domain: &ArcPolygon, base: usize, n_coarse: usize, r_max: Option<f64>) -> Result<GridSweepResult> {
    let r_max = r_max.unwrap_or_else(|| domain.inradius().0);
    let mut levels = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for res in [base, 2 * base, 4 * base] {
        let g = GridDomain::from_arcpolygon(domain, res)?;
        let px = g.raster().pixel;
        let q = |r: f64| g.opening(r).map_or(f64::INFINITY, |m| m.quotient());
        let (lo, hi) = match prev {
            None => {
                let rs: Vec<f64> = (1..=n_coarse).map(|i| r_max * i as f64 / (n_coarse + 1) as f64).collect();
                let vals: Vec<f64> = rs.iter().map(|&r| q(r)).collect();
                let mut ib = None;
                for (i, v) in vals.iter().enumerate() {
                    if v.is_finite() && ib.is_none_or(|b: usize| *v <= vals[b]) {
                        ib = Some(i);
                    }
                }
                let ib = ib.ok_or_else(|| Error::Domain("every raster opening is empty".into()))?;
                let lo = if ib > 0 { rs[ib - 1] } else { 0.5 * rs[0] };
                let hi = if ib + 1 < n_coarse { rs[ib + 1] } else { r_max };
                (lo, hi)
            }
            Some((r, w)) => ((r - 2.0 * w).max(0.5 * w), (r + 2.0 * w).min(r_max)),
        };
        let (r_hat, quotient) = golden_section(q, lo, hi, 0.25 * px);
        levels.push(GridLevel { resolution: res, r_hat, quotient });
        prev = Some((r_hat, px.max(hi - lo) * 0.25));
    }
    let extrapolation = richardson([levels[0].quotient, levels[1].quotient, levels[2].quotient]);
    Ok(GridSweepResult { levels, extrapolation })
}
