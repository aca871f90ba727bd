//! EKF-SLAM with known correspondences on a circle of eight landmarks.

use navsim::navcore::{
    motion_unicycle, observe_range_bearing, Mat, RangeBearing, RngStream, VehicleState,
};
use navsim::sim::slam_world;
use navsim::slam::{ekf_slam_step, EkfSlamState};

fn main() -> navsim::Result<()> {
    let (landmarks, start) = slam_world();
    let dt = 0.1;
    let mut rng = RngStream::new(1);
    let mut truth = VehicleState {
        pose: start,
        v: 1.0,
    };
    let mut s = EkfSlamState::new(start, Mat::zeros(3, 3))?;
    let m = Mat::from_diag(&[0.01, 0.0025]);
    let r = Mat::from_diag(&[0.04, 0.0009]);

    for _ in 0..700 {
        truth = motion_unicycle(&truth, 1.0, 0.1, dt)?;
        let u = (rng.gaussian(1.0, 0.1)?, rng.gaussian(0.1, 0.05)?);
        let mut z = Vec::new();
        for (id, lm) in landmarks.iter().enumerate() {
            let e = observe_range_bearing(&truth.pose, *lm)?;
            z.push(RangeBearing {
                range: rng.gaussian(e.range, 0.2)?,
                bearing: rng.gaussian(e.bearing, 0.03)?,
                landmark_id: Some(id),
            });
        }
        let yaw = s.pose().yaw;
        let v = Mat::from_rows(&[[yaw.cos() * dt, 0.0], [yaw.sin() * dt, 0.0], [0.0, dt]]);
        s = ekf_slam_step(&s, u, dt, &z, &(&(&v * &m) * &v.transpose()), &r)?;
    }
    let p = s.pose();
    println!(
        "pose error {:.3} m",
        (p.x - truth.pose.x).hypot(p.y - truth.pose.y)
    );
    for (id, lm) in landmarks.iter().enumerate() {
        let e = s.landmark(id).expect("all landmarks observed");
        println!(
            "landmark {id}: est ({:7.3}, {:7.3})  error {:.3}",
            e.0,
            e.1,
            (e.0 - lm.0).hypot(e.1 - lm.1)
        );
    }
    Ok(())
}
