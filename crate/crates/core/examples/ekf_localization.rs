//! EKF on a unicycle with noisy odometry and GNSS-like position fixes.

use navsim::localization::{ekf_predict, ekf_update, EkfBelief};
use navsim::navcore::{motion_input_jacobian, motion_unicycle, Mat, RngStream, VehicleState};

fn main() -> navsim::Result<()> {
    let dt = 0.1;
    let mut rng = RngStream::new(7);
    let mut truth = VehicleState::new(0.0, 0.0, 0.0, 1.0);
    let mut est = EkfBelief::new(truth, Mat::from_diag(&[0.01, 0.01, 0.001, 0.01]))?;
    let m = Mat::from_diag(&[0.2f64.powi(2), 0.1f64.powi(2)]);
    let r = Mat::from_diag(&[0.25, 0.25]);

    for k in 1..=300 {
        truth = motion_unicycle(&truth, 1.0, 0.1, dt)?;
        let u = (rng.gaussian(1.0, 0.2)?, rng.gaussian(0.1, 0.1)?);
        let v = motion_input_jacobian(&est.state(), dt);
        est = ekf_predict(&est, u, &(&(&v * &m) * &v.transpose()), dt)?;
        let z = (
            rng.gaussian(truth.pose.x, 0.5)?,
            rng.gaussian(truth.pose.y, 0.5)?,
        );
        est = ekf_update(&est, z, &r)?;
        if k % 50 == 0 {
            let e = est.state().pose;
            println!(
                "t={:5.1}  truth=({:6.2},{:6.2})  est=({:6.2},{:6.2})  trace(P)={:.4}",
                k as f64 * dt,
                truth.pose.x,
                truth.pose.y,
                e.x,
                e.y,
                est.cov().trace()
            );
        }
    }
    Ok(())
}
