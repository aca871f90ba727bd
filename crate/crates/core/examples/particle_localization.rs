//! Particle filter against four known landmarks with range-bearing sensing.

use navsim::localization::{effective_sample_size, pf_step, ParticleSet, PfNoise};
use navsim::navcore::{
    motion_unicycle, observe_range_bearing, RangeBearing, RngStream, VehicleState,
};

fn main() -> navsim::Result<()> {
    let landmarks = [(10.0, 0.0), (10.0, 10.0), (0.0, 15.0), (-5.0, 20.0)];
    let noise = PfNoise::default();
    let dt = 0.1;
    let mut rng = RngStream::new(3);
    let mut truth = VehicleState::new(0.0, 0.0, 0.0, 1.0);
    let mut set = ParticleSet::uniform_at(truth.pose, 100)?;

    for k in 1..=300 {
        truth = motion_unicycle(&truth, 1.0, 0.1, dt)?;
        let u = (
            rng.gaussian(1.0, noise.v_std)?,
            rng.gaussian(0.1, noise.omega_std)?,
        );
        let mut z = Vec::new();
        for (id, lm) in landmarks.iter().enumerate() {
            let exact = observe_range_bearing(&truth.pose, *lm)?;
            z.push(RangeBearing {
                range: rng.gaussian(exact.range, noise.range_std)?,
                bearing: rng.gaussian(exact.bearing, noise.bearing_std)?,
                landmark_id: Some(id),
            });
        }
        set = pf_step(&set, u, dt, &landmarks, &z, &noise, &mut rng)?;
        if k % 50 == 0 {
            let e = set.estimate();
            let err = (e.x - truth.pose.x).hypot(e.y - truth.pose.y);
            println!(
                "t={:5.1}  error={err:.3} m  ESS={:.1}",
                k as f64 * dt,
                effective_sample_size(&set)
            );
        }
    }
    Ok(())
}
