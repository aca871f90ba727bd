use std::f64::consts::{PI, TAU};

use crate::error::{NavError, Result};

/// Wraps an angle into the half-open interval (-pi, pi].
///
/// Values already inside the interval are returned untouched, which makes the
/// operation idempotent bit-for-bit.
pub fn normalize_angle(theta: f64) -> Result<f64> {
    if !theta.is_finite() {
        return Err(NavError::invalid(format!("angle {theta} is not finite")));
    }
    Ok(wrap(theta))
}

/// Infallible variant for values known to be finite. NaN passes through.
#[inline]
pub fn wrap(theta: f64) -> f64 {
    if theta > -PI && theta <= PI {
        return theta;
    }
    let a = theta.rem_euclid(TAU);
    if a > PI {
        a - TAU
    } else {
        a
    }
}
