//! Circular sectors of radius `2a` and opening angle `α`, viewed as curved
//! strips about the arc of radius `a`. `α = 2π` is the disc with one radial
//! slit.
//!
//! All computations run at `a = 1` and are rescaled with
//! `h(Ω_a) = h(Ω_1)/a`, so `k = (h − 1/a)·α·a` is independent of `a`.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ArcPolygon, Edge, Point};
use crate::opening::{grid::GridDomain, grid_sweep, sweep, SweepConfig};
use crate::optimize::golden_section;
use crate::result::{CheegerResult, Method};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorSpec {
    pub alpha: f64,
    pub a: f64,
}

impl SectorSpec {
    pub fn new(alpha: f64, a: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= TAU) {
            return Err(Error::Domain(format!("sector angle must lie in (0, 2π], got {alpha}")));
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Domain(format!("sector half-width must be positive, got {a}")));
        }
        Ok(SectorSpec { alpha, a })
    }

    /// Length `αa` of the central arc.
    pub fn base_length(&self) -> f64 {
        self.alpha * self.a
    }

    /// Inradius of the sector of radius `2a`.
    pub fn inradius(&self) -> f64 {
        if self.alpha < PI {
            let s = (0.5 * self.alpha).sin();
            2.0 * self.a * s / (1.0 + s)
        } else {
            self.a
        }
    }
}

/// The sector as an exact boundary: two radial segments and the outer arc.
/// For `α = 2π` both radial segments lie on the positive x-axis (a slit).
pub fn sector_domain(spec: SectorSpec) -> ArcPolygon {
    let rr = 2.0 * spec.a;
    let tip = Point::new(rr * spec.alpha.cos(), rr * spec.alpha.sin());
    let end = if spec.alpha == TAU { Point::new(rr, 0.0) } else { tip };
    ArcPolygon::new_unchecked(
        vec![
            Edge::segment(Point::ORIGIN, Point::new(rr, 0.0)),
            Edge::arc(Point::ORIGIN, rr, 0.0, spec.alpha),
            Edge::segment(end, Point::ORIGIN),
        ],
        Vec::new(),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SectorMethod {
    /// Opening sweep with exact arc/segment openings.
    Exact,
    /// Raster opening sweep at 512, 1024 and 2048 with Richardson
    /// extrapolation.
    Grid,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorOptions {
    pub method: SectorMethod,
    /// Sweep tolerance in `r`, relative to `a`.
    pub tol: f64,
    /// For `α > π` in exact mode, compare against a raster sweep at this
    /// resolution and warn on disagreement beyond `cross_check_tol`.
    pub cross_check: Option<usize>,
    pub cross_check_tol: f64,
}

impl Default for SectorOptions {
    fn default() -> Self {
        SectorOptions { method: SectorMethod::Exact, tol: 1e-8, cross_check: Some(1024), cross_check_tol: 1e-2 }
    }
}

fn sweep_at(spec: SectorSpec, tol: f64) -> Result<crate::opening::OpeningSweepResult> {
    let config = SweepConfig { tol: tol * spec.a, r_max: Some(spec.inradius()), ..SweepConfig::default() };
    sweep(&sector_domain(spec), &config)
}

fn unit_sweep(alpha: f64, tol: f64) -> Result<crate::opening::OpeningSweepResult> {
    sweep_at(SectorSpec { alpha, a: 1.0 }, tol)
}

/// `h` of the sector at `a = 1` from the exact opening sweep.
fn unit_h(alpha: f64, tol: f64) -> Result<f64> {
    Ok(unit_sweep(alpha, tol)?.h)
}

/// Cheeger constant of the sector with `k` populated.
pub fn sector_cheeger(spec: SectorSpec, options: &SectorOptions) -> Result<CheegerResult> {
    let spec = SectorSpec::new(spec.alpha, spec.a)?;
    let unit = SectorSpec { alpha: spec.alpha, a: 1.0 };
    let area = 2.0 * spec.alpha * spec.a * spec.a;
    let iso = 2.0 * (PI / area).sqrt();
    let mut warnings = Vec::new();
    if spec.a != 1.0 {
        warnings.push(format!("computed at a = 1 and rescaled by h(a) = h(1)/a with a = {}", spec.a));
    }
    let (h, r_star, set, method, tolerance) = match options.method {
        SectorMethod::Exact => {
            let res = unit_sweep(spec.alpha, options.tol)?;
            warnings.extend(res.warnings.iter().cloned());
            if spec.alpha > PI {
                if let Some(n) = options.cross_check {
                    let g = GridDomain::from_arcpolygon(&sector_domain(unit), n)?;
                    let q = |r: f64| g.opening(r).map_or(f64::INFINITY, |m| m.quotient());
                    let w = 4.0 * g.raster().pixel;
                    let (_, qg) = golden_section(q, res.r_hat - w, (res.r_hat + w).min(1.0), 0.25 * g.raster().pixel);
                    let rel = (qg - res.h).abs() / res.h;
                    if rel > options.cross_check_tol {
                        warnings.push(format!(
                            "raster cross-check at resolution {n} gives {qg}, relative difference {rel:.2e}"
                        ));
                    }
                }
            }
            match res.set {
                Some(s) => (res.h, Some(res.r_hat), Some(s), Method::OpeningSweepExact, options.tol),
                None => (res.h, None, None, Method::OpeningSweepGrid, options.tol),
            }
        }
        SectorMethod::Grid => {
            let res = grid_sweep(&sector_domain(unit), 512, 48, Some(unit.inradius()))?;
            if res.extrapolation.low_confidence {
                warnings.push("raster triplet is not monotone; finest value reported".into());
            }
            let last = res.levels[2];
            let spread = (res.extrapolation.value - last.quotient).abs();
            (res.extrapolation.value, None, None, Method::OpeningSweepGrid, spread)
        }
    };
    let h_a = h / spec.a;
    let upper = if set.is_some() { h_a } else { f64::INFINITY };
    Ok(CheegerResult {
        h: h_a,
        r_star: r_star.map(|r| r * spec.a),
        cheeger_set: set.map(|s| s.transformed(spec.a, Point::ORIGIN)),
        lower_bound: iso.min(h_a),
        upper_bound: upper,
        k: Some((h_a - 1.0 / spec.a) * spec.alpha * spec.a),
        method,
        tolerance: tolerance * spec.a,
        warnings,
    })
}

/// `k(α) = (h(Ω_a^α) − 1/a)·α·a`, computed directly at the given `a`.
pub fn sector_k(alpha: f64, a: f64, tol: f64) -> Result<f64> {
    let spec = SectorSpec::new(alpha, a)?;
    Ok((sweep_at(spec, tol)?.h - 1.0 / a) * alpha * a)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KMax {
    pub alpha: f64,
    pub k: f64,
}

/// Maximize `k(α)` over `(0, 2π)`: a uniform scan of `n_alpha` angles, then
/// golden-section refinement to width `tol` around the best one.
pub fn k_max_scan(a: f64, n_alpha: usize, tol: f64) -> Result<KMax> {
    if n_alpha < 32 {
        return Err(Error::Domain(format!("angle grid must have at least 32 points, got {n_alpha}")));
    }
    SectorSpec::new(PI, a)?;
    let step = TAU / (n_alpha + 1) as f64;
    let alphas: Vec<f64> = (1..=n_alpha).map(|i| i as f64 * step).collect();
    let ks: Vec<f64> = alphas.par_iter().map(|&al| sector_k(al, a, 1e-10).unwrap_or(f64::NEG_INFINITY)).collect();
    let ib = (0..n_alpha).fold(0, |b, i| if ks[i] > ks[b] { i } else { b });
    let lo = alphas[ib] - step;
    let hi = (alphas[ib] + step).min(TAU);
    let (alpha, neg) = golden_section(|al| -sector_k(al, a, 1e-10).unwrap_or(f64::NEG_INFINITY), lo, hi, tol);
    Ok(KMax { alpha, k: -neg })
}

/// Reference `(label, α/π, h, k)` rows for the standard angle set.
pub const REFERENCE_ROWS: [(&str, f64, f64, f64); 7] = [
    ("pi/10", 0.1, 5.92687, 1.54782),
    ("pi/2", 0.5, 2.16358, 1.82774),
    ("0.656749pi", 0.656749, 1.89111, 1.83856),
    ("3pi/4", 0.75, 1.77915, 1.83583),
    ("pi", 1.0, 1.57714, 1.81315),
    ("3pi/2", 1.5, 1.37582, 1.77101),
    ("2pi", 2.0, 1.27722, 1.74184),
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub label: String,
    pub alpha: f64,
    pub h: f64,
    pub k: f64,
    pub reference_h: f64,
    pub reference_k: f64,
    /// Allowed absolute deviation in `h`.
    pub tolerance: f64,
    pub deviates: bool,
}

/// Compute `h` and `k` at `a = 1` for the standard angle set and compare
/// with the reference values (`5e−4` up to `α = π`, `5e−3` beyond).
pub fn table1(tol: f64) -> Result<Vec<Table1Row>> {
    REFERENCE_ROWS
        .par_iter()
        .map(|&(label, frac, rh, rk)| {
            let alpha = frac * PI;
            let h = unit_h(alpha, tol)?;
            let k = (h - 1.0) * alpha;
            let tolerance = if frac <= 1.0 { 5e-4 } else { 5e-3 };
            let deviates = (h - rh).abs() > tolerance || (k - rk).abs() > tolerance * alpha;
            Ok(Table1Row { label: label.into(), alpha, h, k, reference_h: rh, reference_k: rk, tolerance, deviates })
        })
        .collect()
}

/// `x` rounded to six significant digits.
pub fn six_significant(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let digits = 5 - x.abs().log10().floor() as i32;
    format!("{:.*}", digits.max(0) as usize, x)
}

/// Write table rows as CSV.
pub fn write_table1_csv(rows: &[Table1Row], w: impl Write) -> Result<()> {
    let err = |e: csv::Error| Error::Internal(format!("CSV output failed: {e}"));
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["alpha", "alpha_rad", "h", "k", "reference_h", "reference_k", "deviates"]).map_err(err)?;
    for r in rows {
        wtr.write_record([
            r.label.clone(),
            six_significant(r.alpha),
            six_significant(r.h),
            six_significant(r.k),
            r.reference_h.to_string(),
            r.reference_k.to_string(),
            r.deviates.to_string(),
        ])
        .map_err(err)?;
    }
    wtr.flush().map_err(|e| Error::Internal(format!("CSV output failed: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_metrics() {
        let (p, a) = sector_domain(SectorSpec::new(PI / 2.0, 1.0).unwrap()).metrics();
        assert!((p - (4.0 + PI)).abs() < 1e-12 && (a - PI).abs() < 1e-12);
        let (p, a) = sector_domain(SectorSpec::new(TAU, 1.0).unwrap()).metrics();
        assert!((p - (4.0 * PI + 4.0)).abs() < 1e-12 && (a - 4.0 * PI).abs() < 1e-12);
        let (p, a) = sector_domain(SectorSpec::new(PI, 1.0).unwrap()).metrics();
        assert!((p - (4.0 + TAU)).abs() < 1e-12 && (a - TAU).abs() < 1e-12);
    }

    #[test]
    fn domains_validate() {
        for frac in [0.1, 0.5, 1.0, 1.5, 2.0] {
            sector_domain(SectorSpec::new(frac * PI, 1.0).unwrap()).validate().unwrap();
        }
    }

    #[test]
    fn reference_angles() {
        for &(label, frac, rh, rk) in &REFERENCE_ROWS {
            let r = sector_cheeger(SectorSpec::new(frac * PI, 1.0).unwrap(), &SectorOptions::default()).unwrap();
            let tol = if frac <= 1.0 { 5e-4 } else { 5e-3 };
            assert!((r.h - rh).abs() < tol, "{label}: h = {}", r.h);
            assert!((r.k.unwrap() - rk).abs() < tol * frac * PI, "{label}: k = {:?}", r.k);
            assert_eq!(r.method, Method::OpeningSweepExact);
            r.check().unwrap();
        }
    }

    #[test]
    fn scaling() {
        let s1 = sector_cheeger(SectorSpec::new(PI / 2.0, 1.0).unwrap(), &SectorOptions::default()).unwrap();
        let s3 = sector_cheeger(SectorSpec::new(PI / 2.0, 3.0).unwrap(), &SectorOptions::default()).unwrap();
        assert!((s3.h * 3.0 - s1.h).abs() < 1e-12);
        assert!((s3.k.unwrap() - s1.k.unwrap()).abs() < 1e-12);
        s3.check().unwrap();
    }

    #[test]
    fn k_max_is_scale_free() {
        let k1 = k_max_scan(1.0, 32, 1e-6).unwrap();
        let k2 = k_max_scan(2.0, 32, 1e-6).unwrap();
        assert!((k1.alpha - 0.656749 * PI).abs() < 0.01 * PI);
        assert!((k1.alpha - k2.alpha).abs() < 1e-4);
        assert!((k1.k - k2.k).abs() < 1e-9);
    }

    #[test]
    fn six_digits() {
        assert_eq!(six_significant(5.926871), "5.92687");
        assert_eq!(six_significant(0.0123456789), "0.0123457");
        assert_eq!(six_significant(123.4567), "123.457");
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(SectorSpec::new(0.0, 1.0).is_err());
        assert!(SectorSpec::new(7.0, 1.0).is_err());
        assert!(SectorSpec::new(1.0, -1.0).is_err());
    }
}
