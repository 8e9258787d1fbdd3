//! Cheeger constants of curved strips, their bounds, and stripization.
//!
//! Closed strips (annuli) are their own Cheeger sets with `h = 1/a`;
//! unbounded strips have `h = 1/a` without a minimizer; finite strips are
//! bracketed by `1/a + 1/(400|Γ|) ≤ h ≤ 1/a + 2/|Γ|` and estimated with the
//! opening sweep.

mod profile;

pub use profile::{
    curved_polygon_metrics, profile_metrics, profile_polygon, profile_quotient, stripize, PiecewiseLinear, Profile,
    StripizeReport,
};

use crate::error::{Error, Result};
use crate::geometry::{check_admissible, Strip, StripKind};
use crate::opening::{sweep, SweepConfig};
use crate::result::{CheegerResult, Method};

/// Fiber count used by [`strip_cheeger`] to check admissibility.
pub const ADMISSIBILITY_SAMPLES: usize = 1024;

/// Constant `c` of the finite-strip lower bound `1/a + c/|Γ|`.
pub const FINITE_LOWER_CONSTANT: f64 = 1.0 / 400.0;

/// `[1/a + c/|Γ|, 1/a + 2/|Γ|]` for a finite strip.
pub fn finite_bracket(halfwidth: f64, length: f64) -> (f64, f64) {
    (1.0 / halfwidth + FINITE_LOWER_CONSTANT / length, 1.0 / halfwidth + 2.0 / length)
}

/// Cheeger constant of an admissible strip with the default sweep settings.
pub fn strip_cheeger(strip: &Strip) -> Result<CheegerResult> {
    let a = strip.halfwidth();
    strip_cheeger_with(strip, &SweepConfig { tol: 1e-10 * a, ..SweepConfig::default() })
}

/// [`strip_cheeger`] with explicit sweep settings for finite strips.
pub fn strip_cheeger_with(strip: &Strip, config: &SweepConfig) -> Result<CheegerResult> {
    let report = check_admissible(strip, ADMISSIBILITY_SAMPLES);
    if !report.passed() {
        return Err(Error::Validation(format!(
            "strip is not admissible: max |κ|a = {:.6}, injective = {}",
            report.max_curvature_halfwidth, report.injective
        )));
    }
    let a = strip.halfwidth();
    match strip.kind() {
        StripKind::Annulus => Ok(CheegerResult {
            h: 1.0 / a,
            r_star: Some(a),
            cheeger_set: Some(strip.to_arcpolygon()?),
            lower_bound: 1.0 / a,
            upper_bound: 1.0 / a,
            k: Some(0.0),
            method: Method::AnnulusExact,
            tolerance: 0.0,
            warnings: Vec::new(),
        }),
        StripKind::Infinite | StripKind::SemiInfinite => Ok(CheegerResult {
            h: 1.0 / a,
            r_star: None,
            cheeger_set: None,
            lower_bound: 1.0 / a,
            upper_bound: 1.0 / a,
            k: None,
            method: Method::UnboundedStrip,
            tolerance: 0.0,
            warnings: vec!["the infimum is not attained on an unbounded strip".into()],
        }),
        StripKind::Finite => {
            let len = strip.curve().length();
            let (lo, hi) = finite_bracket(a, len);
            let domain = strip.to_arcpolygon()?;
            let r_max = config.r_max.unwrap_or_else(|| domain.inradius().0.min(a));
            let res = sweep(&domain, &SweepConfig { r_max: Some(r_max), ..*config })?;
            if res.h < lo - 1e-9 || res.h > hi + 1e-6 {
                return Err(Error::Internal(format!("sweep estimate {} lies outside the bracket [{lo}, {hi}]", res.h)));
            }
            let exact = res.set.is_some();
            Ok(CheegerResult {
                h: res.h,
                r_star: exact.then_some(res.r_hat),
                cheeger_set: res.set,
                lower_bound: lo.min(res.h),
                upper_bound: hi.min(res.h),
                k: Some((res.h - 1.0 / a) * len),
                method: if exact { Method::OpeningSweepExact } else { Method::OpeningSweepGrid },
                tolerance: config.tol,
                warnings: res.warnings,
            })
        }
    }
}

/// `(P, A)` of a bounded strip: `(2|Γ| + 4a, 2a|Γ|)` for finite strips and
/// `(2|Γ|, 2a|Γ|)` for annuli. Unbounded strips use their truncation.
pub fn strip_area_perimeter(strip: &Strip) -> Result<(f64, f64)> {
    let a = strip.halfwidth();
    let len = strip.base_length()?;
    let caps = if strip.kind() == StripKind::Annulus { 0.0 } else { 4.0 * a };
    Ok((2.0 * len + caps, 2.0 * a * len))
}

/// Quotient `(4a + 2|Γ_L|)/(2a|Γ_L|)` of the truncation of an unbounded
/// strip, with `|Γ_L| = L` (semi-infinite) or `2L` (infinite).
pub fn truncation_ratio(strip: &Strip, l: f64) -> Result<f64> {
    let len = match strip.kind() {
        StripKind::SemiInfinite => l,
        StripKind::Infinite => 2.0 * l,
        _ => return Err(Error::Domain("truncation applies only to unbounded strips".into())),
    };
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::Domain(format!("truncation length must be positive, got {l}")));
    }
    let a = strip.halfwidth();
    Ok((4.0 * a + 2.0 * len) / (2.0 * a * len))
}
