//! Iterative linear MPC tracking the wavy reference with a kinematic bicycle.

use navsim::navcore::{motion_bicycle, VehicleState};
use navsim::tracking::{
    mpc_track_step, nearest_path_point, reference_window, MpcParams, ReferencePath,
};

fn main() -> navsim::Result<()> {
    let (dt, wheelbase) = (0.1, 2.5);
    let p = MpcParams::default();
    let path = ReferencePath::canonical(2.0, 100.0)?;
    let mut s = VehicleState::new(0.0, 1.0, 0.0, 0.0);
    let mut warm: Option<Vec<(f64, f64)>> = None;
    for k in 0..=300 {
        let (i, e, _) = nearest_path_point(&s.pose, &path);
        let window = reference_window(&path, i, p.horizon, dt, s.pose.yaw);
        let out = mpc_track_step(
            &[s.pose.x, s.pose.y, s.v, s.pose.yaw],
            &window,
            &p,
            wheelbase,
            dt,
            warm.as_deref(),
        )?;
        if k % 25 == 0 {
            println!(
                "t={:5.1}  e={e:+.4}  v={:.3}  accel={:+.3}  steer={:+.3}  outer={}",
                k as f64 * dt,
                s.v,
                out.accel,
                out.steer,
                out.outer_iterations
            );
        }
        s = motion_bicycle(&s, out.accel, out.steer, wheelbase, dt)?;
        let mut shifted = out.inputs[1..].to_vec();
        shifted.push(*out.inputs.last().unwrap());
        warm = Some(shifted);
    }
    Ok(())
}
