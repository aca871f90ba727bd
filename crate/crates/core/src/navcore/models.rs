//! Motion and observation models with analytic Jacobians. All integration is
//! one forward-Euler step.

use std::f64::consts::FRAC_PI_2;

use super::angle::wrap;
use super::linalg::Mat;
use super::types::{Pose2D, RangeBearing, VehicleState};
use crate::error::{NavError, Result};

fn check_dt(dt: f64) -> Result<()> {
    if dt > 0.0 && dt.is_finite() {
        Ok(())
    } else {
        Err(NavError::invalid(format!("dt = {dt} must be positive")))
    }
}

/// Unicycle step driven by commanded speed `v` and yaw rate `omega`.
/// The stored speed becomes the commanded one.
pub fn motion_unicycle(state: &VehicleState, v: f64, omega: f64, dt: f64) -> Result<VehicleState> {
    check_dt(dt)?;
    let p = &state.pose;
    Ok(VehicleState {
        pose: Pose2D {
            x: p.x + v * p.yaw.cos() * dt,
            y: p.y + v * p.yaw.sin() * dt,
            yaw: wrap(p.yaw + omega * dt),
        },
        v,
    })
}

/// Pose-only unicycle step.
pub fn move_pose(p: &Pose2D, v: f64, omega: f64, dt: f64) -> Pose2D {
    Pose2D {
        x: p.x + v * p.yaw.cos() * dt,
        y: p.y + v * p.yaw.sin() * dt,
        yaw: wrap(p.yaw + omega * dt),
    }
}

/// d(next state)/d(state) of [`motion_unicycle`] over (x, y, yaw, v).
///
/// The speed column and row are zero: the next speed is the commanded one.
pub fn motion_jacobian(state: &VehicleState, v: f64, dt: f64) -> Result<Mat> {
    check_dt(dt)?;
    let yaw = state.pose.yaw;
    let mut f = Mat::identity(4);
    f[(0, 2)] = -v * yaw.sin() * dt;
    f[(1, 2)] = v * yaw.cos() * dt;
    f[(3, 3)] = 0.0;
    Ok(f)
}

/// d(next state)/d(v, omega) of [`motion_unicycle`], 4x2.
pub fn motion_input_jacobian(state: &VehicleState, dt: f64) -> Mat {
    let yaw = state.pose.yaw;
    Mat::from_rows(&[
        [yaw.cos() * dt, 0.0],
        [yaw.sin() * dt, 0.0],
        [0.0, dt],
        [1.0, 0.0],
    ])
}

fn check_bicycle(steer: f64, wheelbase: f64, dt: f64) -> Result<()> {
    check_dt(dt)?;
    if !(wheelbase > 0.0) {
        return Err(NavError::invalid(format!(
            "wheelbase {wheelbase} must be positive"
        )));
    }
    if !(steer.abs() <= FRAC_PI_2 - 1e-6) {
        return Err(NavError::invalid(format!(
            "steer {steer} outside (-pi/2, pi/2)"
        )));
    }
    Ok(())
}

/// Kinematic bicycle referenced at the rear axle.
pub fn motion_bicycle(
    state: &VehicleState,
    accel: f64,
    steer: f64,
    wheelbase: f64,
    dt: f64,
) -> Result<VehicleState> {
    check_bicycle(steer, wheelbase, dt)?;
    let [x, y, yaw, v] = bicycle_raw(&state.to_vec(), accel, steer, wheelbase, dt);
    Ok(VehicleState {
        pose: Pose2D {
            x,
            y,
            yaw: wrap(yaw),
        },
        v,
    })
}

/// Unwrapped bicycle map over (x, y, yaw, v); no validation.
pub(crate) fn bicycle_raw(s: &[f64], accel: f64, steer: f64, wheelbase: f64, dt: f64) -> [f64; 4] {
    let (x, y, yaw, v) = (s[0], s[1], s[2], s[3]);
    [
        x + v * yaw.cos() * dt,
        y + v * yaw.sin() * dt,
        yaw + v * steer.tan() / wheelbase * dt,
        v + accel * dt,
    ]
}

/// Jacobians of [`motion_bicycle`]: (4x4 over (x, y, yaw, v), 4x2 over (accel, steer)).
pub fn bicycle_jacobian(
    state: &VehicleState,
    steer: f64,
    wheelbase: f64,
    dt: f64,
) -> Result<(Mat, Mat)> {
    check_bicycle(steer, wheelbase, dt)?;
    let (yaw, v) = (state.pose.yaw, state.v);
    let mut a = Mat::identity(4);
    a[(0, 2)] = -v * yaw.sin() * dt;
    a[(0, 3)] = yaw.cos() * dt;
    a[(1, 2)] = v * yaw.cos() * dt;
    a[(1, 3)] = yaw.sin() * dt;
    a[(2, 3)] = steer.tan() / wheelbase * dt;
    let mut b = Mat::zeros(4, 2);
    b[(2, 1)] = v * dt / (wheelbase * steer.cos().powi(2));
    b[(3, 0)] = dt;
    Ok((a, b))
}

/// Range and bearing from pose `p` to a point landmark.
pub fn observe_range_bearing(p: &Pose2D, lm: (f64, f64)) -> Result<RangeBearing> {
    let dx = lm.0 - p.x;
    let dy = lm.1 - p.y;
    let range = dx.hypot(dy);
    if !(range > 1e-9) {
        return Err(NavError::SingularObservation);
    }
    Ok(RangeBearing {
        range,
        bearing: wrap(dy.atan2(dx) - p.yaw),
        landmark_id: None,
    })
}

/// Jacobians of [`observe_range_bearing`]: 2x3 over the pose and 2x2 over
/// the landmark position.
pub fn range_bearing_jacobian(p: &Pose2D, lm: (f64, f64)) -> Result<(Mat, Mat)> {
    let dx = lm.0 - p.x;
    let dy = lm.1 - p.y;
    let q = dx * dx + dy * dy;
    let r = q.sqrt();
    if !(r > 1e-9) {
        return Err(NavError::SingularObservation);
    }
    let h_pose = Mat::from_rows(&[[-dx / r, -dy / r, 0.0], [dy / q, -dx / q, -1.0]]);
    let h_lm = Mat::from_rows(&[[dx / r, dy / r], [-dy / q, dx / q]]);
    Ok((h_pose, h_lm))
}
