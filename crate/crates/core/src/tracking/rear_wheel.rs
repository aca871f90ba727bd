use crate::error::{NavError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RearWheelGains {
    pub k_theta: f64,
    pub k_e: f64,
}

impl Default for RearWheelGains {
    fn default() -> Self {
        RearWheelGains {
            k_theta: 1.0,
            k_e: 0.5,
        }
    }
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// Yaw-rate command for rear-wheel feedback steering.
///
/// `e` is the cross-track error (positive left of the path), `theta_e` the
/// heading error and `kappa` the path curvature at the nearest point.
pub fn rear_wheel_feedback(
    v: f64,
    e: f64,
    theta_e: f64,
    kappa: f64,
    gains: RearWheelGains,
) -> Result<f64> {
    let denom = 1.0 - kappa * e;
    if denom.abs() <= 1e-6 {
        return Err(NavError::SingularGeometry(denom));
    }
    Ok(v * kappa * theta_e.cos() / denom
        - gains.k_theta * v.abs() * theta_e
        - gains.k_e * v * sinc(theta_e) * e)
}
