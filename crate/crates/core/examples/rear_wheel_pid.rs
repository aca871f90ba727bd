//! Rear-wheel feedback steering plus PID speed control from a 1 m offset.

use navsim::navcore::{move_pose, Pose2D};
use navsim::tracking::{
    nearest_path_point, pid_step, rear_wheel_feedback, PidState, RearWheelGains, ReferencePath,
};

fn main() -> navsim::Result<()> {
    let dt = 0.1;
    let path = ReferencePath::canonical(2.0, 100.0)?;
    let mut pid = PidState::new(1.0, 0.1, 0.0, -1.0, 1.0)?;
    let mut pose = Pose2D::new(0.0, 1.0, 0.0);
    let mut v = 0.0;
    for k in 0..=300 {
        let (i, e, th) = nearest_path_point(&pose, &path);
        let omega = rear_wheel_feedback(
            v,
            e,
            th,
            path.waypoints[i].curvature,
            RearWheelGains::default(),
        )?;
        let (a, next) = pid_step(&pid, 2.0 - v, dt)?;
        if k % 25 == 0 {
            println!(
                "t={:5.1}  e={e:+.4}  theta_e={th:+.4}  v={v:.3}",
                k as f64 * dt
            );
        }
        pid = next;
        pose = move_pose(&pose, v, omega, dt);
        v += a * dt;
    }
    Ok(())
}
