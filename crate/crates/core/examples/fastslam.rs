//! FastSLAM 2.0 with 30 particles on the same circular world as the EKF-SLAM example.

use navsim::navcore::{
    motion_unicycle, observe_range_bearing, RangeBearing, RngStream, VehicleState,
};
use navsim::sim::slam_world;
use navsim::slam::{
    best_particle, fastslam2_step, fastslam_estimate, fastslam_init, FastSlamNoise,
};

fn main() -> navsim::Result<()> {
    let (landmarks, start) = slam_world();
    let noise = FastSlamNoise::default();
    let dt = 0.1;
    let mut rng = RngStream::new(1);
    let mut truth = VehicleState {
        pose: start,
        v: 1.0,
    };
    let mut particles = fastslam_init(start, 30)?;

    for _ in 0..700 {
        truth = motion_unicycle(&truth, 1.0, 0.1, dt)?;
        let u = (
            rng.gaussian(1.0, noise.v_std)?,
            rng.gaussian(0.1, noise.omega_std)?,
        );
        let mut z = Vec::new();
        for (id, lm) in landmarks.iter().enumerate() {
            let e = observe_range_bearing(&truth.pose, *lm)?;
            z.push(RangeBearing {
                range: rng.gaussian(e.range, noise.range_std)?,
                bearing: rng.gaussian(e.bearing, noise.bearing_std)?,
                landmark_id: Some(id),
            });
        }
        particles = fastslam2_step(&particles, u, dt, &z, &noise, &mut rng)?;
    }
    let p = fastslam_estimate(&particles);
    println!(
        "pose error {:.3} m",
        (p.x - truth.pose.x).hypot(p.y - truth.pose.y)
    );
    for (id, l) in &best_particle(&particles).landmarks {
        let t = landmarks[*id];
        println!(
            "landmark {id}: est ({:7.3}, {:7.3})  error {:.3}",
            l.mean.0,
            l.mean.1,
            (l.mean.0 - t.0).hypot(l.mean.1 - t.1)
        );
    }
    Ok(())
}
