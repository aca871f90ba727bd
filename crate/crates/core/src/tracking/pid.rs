use crate::error::{NavError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PidState {
    pub kp: f64,
    pub ki: f64,
    pub kd: f64,
    pub integral: f64,
    pub prev_error: f64,
    pub u_min: f64,
    pub u_max: f64,
}

impl PidState {
    pub fn new(kp: f64, ki: f64, kd: f64, u_min: f64, u_max: f64) -> Result<Self> {
        if !(u_min < u_max) {
            return Err(NavError::invalid(format!(
                "u_min {u_min} must be below u_max {u_max}"
            )));
        }
        Ok(PidState {
            kp,
            ki,
            kd,
            integral: 0.0,
            prev_error: 0.0,
            u_min,
            u_max,
        })
    }
}

/// Clamped PID output. The integral only accumulates on steps where the raw
/// output stays inside the bounds.
pub fn pid_step(s: &PidState, error: f64, dt: f64) -> Result<(f64, PidState)> {
    if !(dt > 0.0) {
        return Err(NavError::invalid(format!("dt = {dt} must be positive")));
    }
    let candidate = s.integral + error * dt;
    let u_raw = s.kp * error + s.ki * candidate + s.kd * (error - s.prev_error) / dt;
    let saturated = !(u_raw >= s.u_min && u_raw <= s.u_max);
    let next = PidState {
        integral: if saturated { s.integral } else { candidate },
        prev_error: error,
        ..*s
    };
    Ok((u_raw.clamp(s.u_min, s.u_max), next))
}
