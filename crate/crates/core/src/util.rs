use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::CoreError;

/// Tolerance for "these weights form a probability vector".
pub(crate) const WEIGHT_SUM_TOL: f64 = 1e-12;
/// Tolerance for "this complex number lies on the unit circle".
pub(crate) const UNIMODULAR_TOL: f64 = 1e-9;

/// Compensated (Kahan) sum. Plain accumulation of 1e5 near-equal weights
/// loses more than the 1e-12 budget the probability check allows.
pub(crate) fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Checks strictly positive finite weights summing to 1 within [`WEIGHT_SUM_TOL`].
pub(crate) fn validate_probability_weights(weights: &[f64]) -> Result<(), CoreError> {
    if weights.is_empty() {
        return Err(CoreError::InvalidWeights {
            reason: "empty weight list".into(),
        });
    }
    for (i, &w) in weights.iter().enumerate() {
        if !w.is_finite() {
            return Err(CoreError::NonFinite { index: i });
        }
        if w <= 0.0 {
            return Err(CoreError::InvalidWeights {
                reason: format!("weight {i} is {w}, expected > 0"),
            });
        }
    }
    let sum = kahan_sum(weights.iter().copied());
    if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(CoreError::InvalidWeights {
            reason: format!("weights sum to {sum}, expected 1"),
        });
    }
    Ok(())
}

/// Reduces an angle to [0, 2π). `rem_euclid` alone can round a tiny negative
/// input up to exactly 2π, which would escape the half-open interval.
pub(crate) fn canonical_angle(angle: f64) -> f64 {
    let mut a = angle.rem_euclid(TAU);
    if a >= TAU {
        a = 0.0;
    }
    a
}

pub(crate) fn require_finite_angle(angle: f64, index: usize) -> Result<(), CoreError> {
    if angle.is_finite() {
        Ok(())
    } else {
        Err(CoreError::NonFinite { index })
    }
}

/// Checks |z| = 1 within [`UNIMODULAR_TOL`].
pub(crate) fn validate_unimodular(z: Complex64, name: &'static str) -> Result<(), CoreError> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(CoreError::InvalidParameter {
            name,
            reason: "not finite".into(),
        });
    }
    if (z.norm() - 1.0).abs() > UNIMODULAR_TOL {
        return Err(CoreError::InvalidParameter {
            name,
            reason: format!("modulus {} is not 1", z.norm()),
        });
    }
    Ok(())
}

pub(crate) fn validate_positive(value: f64, name: &'static str) -> Result<(), CoreError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(CoreError::InvalidParameter {
            name,
            reason: format!("{value} is not a positive finite number"),
        })
    }
}
