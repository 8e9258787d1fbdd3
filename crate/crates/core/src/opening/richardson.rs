use serde::{Deserialize, Serialize};

/// Limit estimate from values at resolutions `n`, `2n`, `4n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extrapolation {
    pub value: f64,
    /// Observed convergence order `log2((v₁ − v₂)/(v₂ − v₃))`.
    pub order: Option<f64>,
    /// Set when the triplet is not monotone; `value` is then the finest
    /// sample.
    pub low_confidence: bool,
}

/// First-order Richardson extrapolation `2v₃ − v₂` assuming an `O(1/n)`
/// error, for values ordered from coarsest to finest.
pub fn richardson(values: [f64; 3]) -> Extrapolation {
    let [v1, v2, v3] = values;
    let d1 = v1 - v2;
    let d2 = v2 - v3;
    if d1 == 0.0 && d2 == 0.0 {
        return Extrapolation { value: v3, order: None, low_confidence: false };
    }
    if d1 * d2 <= 0.0 || !(d1.is_finite() && d2.is_finite()) {
        return Extrapolation { value: v3, order: None, low_confidence: true };
    }
    Extrapolation { value: 2.0 * v3 - v2, order: Some((d1 / d2).log2()), low_confidence: false }
}
