//! One-dimensional root finding and minimization.

use crate::error::{Error, Result};

/// Bisection for a sign change of `f` on `[lo, hi]`. Returns the final
/// bracket, of width at most `tol`.
pub fn bisect(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)> {
    let flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok((lo, lo));
    }
    if fhi == 0.0 {
        return Ok((hi, hi));
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return Err(Error::Internal(format!("bisection bracket [{lo}, {hi}] does not change sign ({flo}, {fhi})")));
    }
    let positive_low = flo > 0.0;
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok((mid, mid));
        }
        if (fm > 0.0) == positive_low {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Golden-section minimization on `[lo, hi]` down to bracket width `tol`.
/// Ties go to the larger abscissa. Returns `(x, f(x))`.
pub fn golden_section(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
        if x1 >= x2 {
            break;
        }
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let (lo, hi) = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((lo - 2f64.sqrt()).abs() < 1e-13 && hi - lo <= 1e-14);
        assert!(bisect(|x| x * x + 1.0, 0.0, 2.0, 1e-9).is_err());
    }

    #[test]
    fn golden_section_parabola() {
        let (x, fx) = golden_section(|x| (x - 0.3).powi(2) + 1.0, -1.0, 2.0, 1e-10);
        // Function values are flat to rounding within ~√ε of the minimum.
        assert!((x - 0.3).abs() < 3e-8);
        assert!((fx - 1.0).abs() < 1e-15);
    }

    #[test]
    fn golden_section_prefers_larger_on_plateau() {
        let (x, _) = golden_section(|_| 1.0, 0.0, 1.0, 1e-6);
        assert!(x > 0.999);
    }
}
