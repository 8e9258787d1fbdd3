//! Lower bounds on `h` from vector fields: if `|V| ≤ 1` and `div V ≥ h`
//! on a domain then its Cheeger constant is at least `h`.
//!
//! Fields live on a node grid in tube coordinates `(q, t)`, where the
//! divergence reads `(1/J)(∂_q V_q + ∂_t(J V_t))` with `J = 1 − κ(q)t`.
//! Components are taken in the orthonormal frame `(T, N)`, so `|V|² =
//! V_q² + V_t²`.
//!
//! A grid check cannot certify a pointwise inequality; reports therefore
//! carry the tolerances they were checked with.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Strip;

/// First positive zero of the Bessel function `J₀`.
pub const J01: f64 = 2.404825557695773;

/// Below this `|κ|a` the flat-strip branch `V_t = t/a` is used.
pub const FLAT_THRESHOLD: f64 = 1e-8;

/// Normal component of the strip field at curvature `kappa`:
/// `[(1 − κa)(1 + κa) − (1 − κt)²] / (2aκ(1 − κt))`, or `t/a` when
/// `|κ|a < 1e−8`. Its curved divergence is `1/a` and it equals `±1` on the
/// walls `t = ±a`.
pub fn builtin_normal_component(kappa: f64, a: f64, t: f64) -> f64 {
    if (kappa * a).abs() < FLAT_THRESHOLD {
        return t / a;
    }
    let j = 1.0 - kappa * t;
    ((1.0 - kappa * a) * (1.0 + kappa * a) - j * j) / (2.0 * a * kappa * j)
}

/// `(V_q, V_t)` of the built-in strip field at `(q, t)`.
pub fn builtin_strip_field(strip: &Strip, q: f64, t: f64) -> Result<(f64, f64)> {
    let a = strip.halfwidth();
    if t.abs() > a {
        return Err(Error::Domain(format!("offset {t} exceeds half-width {a}")));
    }
    let kappa = strip.curve().curvature(q)?;
    Ok((0.0, builtin_normal_component(kappa, a, t)))
}

/// Node values of a field on `[0, |Γ|] × [−a, a]`, stored `q`-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridField {
    pub strip: Strip,
    pub n_q: usize,
    pub n_t: usize,
    pub v_q: Vec<f64>,
    pub v_t: Vec<f64>,
}

impl GridField {
    pub fn new(strip: Strip, n_q: usize, n_t: usize, v_q: Vec<f64>, v_t: Vec<f64>) -> Result<Self> {
        if n_q < 2 || n_t < 2 {
            return Err(Error::Validation(format!("grid needs at least 2×2 nodes, got {n_q}×{n_t}")));
        }
        if v_q.len() != n_q * n_t || v_t.len() != n_q * n_t {
            return Err(Error::Validation(format!(
                "expected {} values per component, got {} and {}",
                n_q * n_t,
                v_q.len(),
                v_t.len()
            )));
        }
        if !v_q.iter().chain(&v_t).all(|v| v.is_finite()) {
            return Err(Error::Validation("field has non-finite values".into()));
        }
        Ok(GridField { strip, n_q, n_t, v_q, v_t })
    }

    /// Sample `f(q, t, κ(q))` at every node.
    pub fn from_fn(
        strip: Strip,
        n_q: usize,
        n_t: usize,
        f: impl Fn(f64, f64, f64) -> (f64, f64) + Sync,
    ) -> Result<Self> {
        if n_q < 2 || n_t < 2 {
            return Err(Error::Validation(format!("grid needs at least 2×2 nodes, got {n_q}×{n_t}")));
        }
        let probe = GridField { strip, n_q, n_t, v_q: Vec::new(), v_t: Vec::new() };
        let (v_q, v_t): (Vec<f64>, Vec<f64>) = (0..n_q * n_t)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k / n_t, k % n_t);
                let q = probe.q(i);
                f(q, probe.t(j), probe.strip.curve().curvature_clamped(q))
            })
            .unzip();
        GridField::new(probe.strip, n_q, n_t, v_q, v_t)
    }

    /// The built-in strip field sampled on an `n_q × n_t` grid.
    pub fn builtin(strip: &Strip, n_q: usize, n_t: usize) -> Result<Self> {
        let a = strip.halfwidth();
        GridField::from_fn(strip.clone(), n_q, n_t, |_, t, k| (0.0, builtin_normal_component(k, a, t)))
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let s = |v: &[f64]| v.iter().map(|x| x * factor).collect();
        GridField::new(self.strip.clone(), self.n_q, self.n_t, s(&self.v_q), s(&self.v_t))
    }

    pub fn dq(&self) -> f64 {
        self.strip.curve().length() / (self.n_q - 1) as f64
    }

    pub fn dt(&self) -> f64 {
        2.0 * self.strip.halfwidth() / (self.n_t - 1) as f64
    }

    pub fn q(&self, i: usize) -> f64 {
        if i == self.n_q - 1 {
            self.strip.curve().length()
        } else {
            i as f64 * self.dq()
        }
    }

    pub fn t(&self, j: usize) -> f64 {
        let a = self.strip.halfwidth();
        if j == self.n_t - 1 {
            a
        } else {
            -a + j as f64 * self.dt()
        }
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.n_t + j
    }

    /// Largest `|V|` over all nodes.
    pub fn sup_norm(&self) -> f64 {
        self.v_q.par_iter().zip(&self.v_t).map(|(a, b)| a.hypot(*b)).reduce(|| 0.0, f64::max)
    }

    /// Error unless this field was built for `strip`.
    pub fn check_matches(&self, strip: &Strip) -> Result<()> {
        if &self.strip != strip {
            return Err(Error::Validation("field grid was built for a different strip".into()));
        }
        Ok(())
    }
}

/// Central-difference divergence at interior node `(i, j)`.
pub fn divergence(field: &GridField, i: usize, j: usize) -> Result<f64> {
    if i == 0 || j == 0 || i + 1 >= field.n_q || j + 1 >= field.n_t {
        return Err(Error::Domain(format!("node ({i}, {j}) is not interior")));
    }
    Ok(divergence_unchecked(field, i, j, field.strip.curve().curvature_clamped(field.q(i))))
}

fn divergence_unchecked(field: &GridField, i: usize, j: usize, kappa: f64) -> f64 {
    let jac = |t: f64| 1.0 - kappa * t;
    let (t0, t, t1) = (field.t(j - 1), field.t(j), field.t(j + 1));
    let dq = field.q(i + 1) - field.q(i - 1);
    let d_q = (field.v_q[field.idx(i + 1, j)] - field.v_q[field.idx(i - 1, j)]) / dq;
    let d_t = (jac(t1) * field.v_t[field.idx(i, j + 1)] - jac(t0) * field.v_t[field.idx(i, j - 1)]) / (t1 - t0);
    (d_q + d_t) / jac(t)
}

/// Divergence at every interior node, `(n_q − 2)·(n_t − 2)` values in
/// `q`-major order.
pub fn interior_divergence(field: &GridField) -> Vec<f64> {
    let (nq, nt) = (field.n_q, field.n_t);
    (1..nq - 1)
        .into_par_iter()
        .flat_map_iter(|i| {
            let kappa = field.strip.curve().curvature_clamped(field.q(i));
            (1..nt - 1).map(move |j| divergence_unchecked(field, i, j, kappa))
        })
        .collect()
}

/// Largest `|div_h V − exact(q, t, κ)|` over interior nodes.
pub fn divergence_error(field: &GridField, exact: impl Fn(f64, f64, f64) -> f64 + Sync) -> f64 {
    let nt = field.n_t;
    interior_divergence(field)
        .par_iter()
        .enumerate()
        .map(|(k, d)| {
            let (i, j) = (1 + k / (nt - 2), 1 + k % (nt - 2));
            let q = field.q(i);
            (d - exact(q, field.t(j), field.strip.curve().curvature_clamped(q))).abs()
        })
        .reduce(|| 0.0, f64::max)
}

/// Default divergence tolerance `10/n_t · max|κ|a + 1e−6`.
pub fn default_divergence_tolerance(field: &GridField) -> f64 {
    10.0 / field.n_t as f64 * field.strip.curve().max_abs_curvature() * field.strip.halfwidth() + 1e-6
}

/// Default tolerance on `sup|V| ≤ 1`.
pub const DEFAULT_NORM_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertReport {
    pub n_q: usize,
    pub n_t: usize,
    pub sup_norm: f64,
    pub min_divergence: f64,
    /// `(q, t)` of the node attaining the minimum divergence.
    pub min_divergence_at: (f64, f64),
    pub h_claim: f64,
    pub norm_tolerance: f64,
    pub divergence_tolerance: f64,
    pub passed: bool,
    /// `h_claim`, when certified up to the tolerances above.
    pub certified_lower_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

/// Check `sup|V| ≤ 1 + tol_V` and `min div V ≥ h_claim − tol_div` on the
/// grid; `None` tolerances take the defaults.
pub fn certify_lower_bound(
    field: &GridField,
    h_claim: f64,
    norm_tolerance: Option<f64>,
    divergence_tolerance: Option<f64>,
) -> Result<CertReport> {
    if field.n_q < 3 || field.n_t < 3 {
        return Err(Error::Validation("certification needs interior nodes (at least 3×3)".into()));
    }
    if !h_claim.is_finite() {
        return Err(Error::Domain(format!("claimed bound must be finite, got {h_claim}")));
    }
    let tol_v = norm_tolerance.unwrap_or(DEFAULT_NORM_TOLERANCE);
    let tol_div = divergence_tolerance.unwrap_or_else(|| default_divergence_tolerance(field));
    let sup = field.sup_norm();
    let div = interior_divergence(field);
    let (k, &min_div) = div.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("interior nodes exist");
    let nt = field.n_t - 2;
    let at = (field.q(1 + k / nt), field.t(1 + k % nt));
    let mut failure = None;
    if sup > 1.0 + tol_v {
        failure = Some(format!("sup|V| = {sup} exceeds 1 + {tol_v}"));
    } else if min_div < h_claim - tol_div {
        failure = Some(format!("divergence {min_div} at (q, t) = ({}, {}) is below {h_claim} − {tol_div}", at.0, at.1));
    }
    let passed = failure.is_none();
    Ok(CertReport {
        n_q: field.n_q,
        n_t: field.n_t,
        sup_norm: sup,
        min_divergence: min_div,
        min_divergence_at: at,
        h_claim,
        norm_tolerance: tol_v,
        divergence_tolerance: tol_div,
        passed,
        certified_lower_bound: passed.then_some(h_claim),
        failure,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrongerBound {
    Cheeger,
    Strip,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueBounds {
    /// `(h/p)^p`.
    pub cheeger_bound: f64,
    /// `j₀,₁²/(4a²)`, for `p = 2` only.
    pub strip_bound: Option<f64>,
    pub stronger: Option<StrongerBound>,
}

/// Lower bounds on the first `p`-Laplacian eigenvalue.
pub fn eigenvalue_bounds(h: f64, a: f64, p: f64) -> Result<EigenvalueBounds> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Domain(format!("exponent must lie in (1, ∞), got {p}")));
    }
    if !(h > 0.0 && a > 0.0) {
        return Err(Error::Domain(format!("h and a must be positive, got h = {h}, a = {a}")));
    }
    let cheeger_bound = (h / p).powf(p);
    let (strip_bound, stronger) = if p == 2.0 {
        let s = J01 * J01 / (4.0 * a * a);
        (Some(s), Some(if s >= cheeger_bound { StrongerBound::Strip } else { StrongerBound::Cheeger }))
    } else {
        (None, None)
    };
    Ok(EigenvalueBounds { cheeger_bound, strip_bound, stronger })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Curve, Point};

    fn annulus() -> Strip {
        Strip::new(Curve::circle(Point::ORIGIN, 2.0).unwrap(), 1.0).unwrap()
    }

    fn flat() -> Strip {
        Strip::new(Curve::segment(Point::ORIGIN, Point::new(4.0, 0.0)).unwrap(), 1.0).unwrap()
    }

    #[test]
    fn field_values() {
        assert_eq!(builtin_strip_field(&flat(), 1.0, 0.5).unwrap(), (0.0, 0.5));
        for kappa in [-0.9, -0.3, 0.2, 0.7] {
            assert!((builtin_normal_component(kappa, 1.0, 1.0) - 1.0).abs() < 1e-12);
            assert!((builtin_normal_component(kappa, 1.0, -1.0) + 1.0).abs() < 1e-12);
        }
        // The curved branch tends to t/a at first order in κa, with slope
        // (t² − a²)/(2a); at the switch threshold both branches agree.
        for ka in [1e-2, 1e-3, 1e-4] {
            let diff = builtin_normal_component(ka, 1.0, 0.3) - 0.3;
            assert!((diff / ka - (0.09 - 1.0) / 2.0).abs() < 2.0 * ka);
        }
        let edge = builtin_normal_component(1.0001 * FLAT_THRESHOLD, 1.0, 0.3);
        assert!((edge - 0.3).abs() < 1e-7);
        assert!(builtin_strip_field(&flat(), 1.0, 1.5).is_err());
    }

    #[test]
    fn divergence_values() {
        let f = GridField::builtin(&flat(), 33, 17).unwrap();
        assert!(interior_divergence(&f).iter().all(|d| (d - 1.0).abs() < 1e-12));
        let g = GridField::builtin(&annulus(), 1024, 1024).unwrap();
        assert!(interior_divergence(&g).iter().all(|d| (d - 1.0).abs() < 1e-4));
        let z = g.scaled(0.0).unwrap();
        assert!(interior_divergence(&z).iter().all(|&d| d == 0.0));
        assert!(divergence(&g, 0, 3).is_err());
    }

    #[test]
    fn certification() {
        let f = GridField::builtin(&annulus(), 1024, 1024).unwrap();
        let ok = certify_lower_bound(&f, 1.0, None, None).unwrap();
        assert!(ok.passed && ok.certified_lower_bound == Some(1.0));
        let double = certify_lower_bound(&f.scaled(2.0).unwrap(), 1.0, None, None).unwrap();
        assert!(!double.passed && (double.sup_norm - 2.0).abs() < 1e-12);
        let high = certify_lower_bound(&f, 1.01, None, None).unwrap();
        assert!(!high.passed && high.failure.unwrap().contains("divergence"));
        assert!(f.check_matches(&flat()).is_err());
    }

    #[test]
    fn eigenvalues() {
        let b = eigenvalue_bounds(1.0, 1.0, 2.0).unwrap();
        assert_eq!(b.cheeger_bound, 0.25);
        assert!((b.strip_bound.unwrap() - 1.4458).abs() < 1e-4);
        assert_eq!(b.stronger, Some(StrongerBound::Strip));
        assert!((b.strip_bound.unwrap() / b.cheeger_bound - J01 * J01).abs() < 1e-12);
        assert_eq!(eigenvalue_bounds(2.0, 1.0, 2.0).unwrap().cheeger_bound, 1.0);
        assert!((eigenvalue_bounds(1.0, 1.0, 1.001).unwrap().cheeger_bound - 1.0).abs() < 1e-2);
        assert!(eigenvalue_bounds(1.0, 1.0, 1.0).is_err());
    }
}
