//! FastSLAM 2.0 with known correspondences.
//!
//! Each particle carries a pose and one 2x2 EKF per landmark. The pose is
//! drawn from the motion prior refined by the linearized likelihood of the
//! landmarks it already knows, one observation at a time.

use std::collections::BTreeMap;

use super::ekf_slam::{landmark_init, landmark_init_jacobian};
use crate::error::{NavError, Result};
use crate::localization::ekf::joseph_update;
use crate::localization::particle::normalize_log_weights;
use crate::navcore::linalg::{cholesky, cholesky_solve, psd_factor, Mat};
use crate::navcore::{
    move_pose, observe_range_bearing, range_bearing_jacobian, wrap, Pose2D, RangeBearing, RngStream,
};

#[derive(Debug, Clone, PartialEq)]
pub struct LandmarkEstimate {
    pub mean: (f64, f64),
    pub cov: Mat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FastSlamParticle {
    pub pose: Pose2D,
    pub weight: f64,
    pub landmarks: BTreeMap<usize, LandmarkEstimate>,
}

impl FastSlamParticle {
    pub fn new(pose: Pose2D, weight: f64) -> Self {
        FastSlamParticle {
            pose,
            weight,
            landmarks: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FastSlamNoise {
    pub v_std: f64,
    pub omega_std: f64,
    pub range_std: f64,
    pub bearing_std: f64,
}

impl Default for FastSlamNoise {
    fn default() -> Self {
        FastSlamNoise {
            v_std: 0.1,
            omega_std: 0.05,
            range_std: 0.2,
            bearing_std: 0.03,
        }
    }
}

impl FastSlamNoise {
    fn r_obs(&self) -> Mat {
        Mat::from_diag(&[self.range_std.powi(2), self.bearing_std.powi(2)])
    }
}

/// N particles at `pose`, uniform weight, empty maps.
pub fn fastslam_init(pose: Pose2D, n: usize) -> Result<Vec<FastSlamParticle>> {
    if n == 0 {
        return Err(NavError::invalid("need at least one particle"));
    }
    Ok(vec![FastSlamParticle::new(pose, 1.0 / n as f64); n])
}

fn ln_det2(m: &Mat) -> f64 {
    (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).ln()
}

/// Pose proposal plus the log of the observation evidence for one particle.
fn propose(
    p: &FastSlamParticle,
    u: (f64, f64),
    dt: f64,
    z: &[RangeBearing],
    noise: &FastSlamNoise,
    r_obs: &Mat,
    rng: &mut RngStream,
) -> Result<(Pose2D, f64)> {
    let predicted = move_pose(&p.pose, u.0, u.1, dt);
    let (s, c) = p.pose.yaw.sin_cos();
    let v_map = Mat::from_rows(&[[c * dt, 0.0], [s * dt, 0.0], [0.0, dt]]);
    let m = Mat::from_diag(&[noise.v_std.powi(2), noise.omega_std.powi(2)]);
    let mut cov = &(&v_map * &m) * &v_map.transpose();
    let mut mean = [predicted.x, predicted.y, predicted.yaw];
    let mut log_evidence = 0.0;

    for obs in z {
        let id = obs.landmark_id.expect("ids checked by caller");
        let Some(lm) = p.landmarks.get(&id) else {
            continue;
        };
        let pose = Pose2D {
            x: mean[0],
            y: mean[1],
            yaw: mean[2],
        };
        let pred = observe_range_bearing(&pose, lm.mean)?;
        let (hx, hm) = range_bearing_jacobian(&pose, lm.mean)?;
        let q = &(&(&hm * &lm.cov) * &hm.transpose()) + r_obs;
        let mut l = &(&(&hx * &cov) * &hx.transpose()) + &q;
        l.symmetrize();
        let chol = cholesky(&l)
            .map_err(|e| NavError::NumericalFailure(format!("evidence covariance: {e}")))?;
        let innov = [obs.range - pred.range, wrap(obs.bearing - pred.bearing)];
        let linv_innov = cholesky_solve(&chol, &Mat::column(&innov));
        let maha = innov[0] * linv_innov[(0, 0)] + innov[1] * linv_innov[(1, 0)];
        log_evidence += -0.5 * maha - 0.5 * (ln_det2(&l) + 2.0 * (2.0 * std::f64::consts::PI).ln());

        let pht = &cov * &hx.transpose();
        let k = cholesky_solve(&chol, &pht.transpose()).transpose();
        for (j, mj) in mean.iter_mut().enumerate() {
            *mj += k[(j, 0)] * innov[0] + k[(j, 1)] * innov[1];
        }
        mean[2] = wrap(mean[2]);
        cov = joseph_update(&cov, &k, &hx, &q);
    }

    let f = psd_factor(&cov)?;
    let draws = [
        rng.gaussian(0.0, 1.0)?,
        rng.gaussian(0.0, 1.0)?,
        rng.gaussian(0.0, 1.0)?,
    ];
    let offset = f.mat_vec(&draws);
    let pose = Pose2D {
        x: mean[0] + offset[0],
        y: mean[1] + offset[1],
        yaw: wrap(mean[2] + offset[2]),
    };
    Ok((pose, log_evidence))
}

fn update_map(p: &mut FastSlamParticle, z: &[RangeBearing], r_obs: &Mat) -> Result<()> {
    for obs in z {
        let id = obs.landmark_id.expect("ids checked by caller");
        match p.landmarks.get_mut(&id) {
            Some(lm) => {
                let pred = observe_range_bearing(&p.pose, lm.mean)?;
                let (_, hm) = range_bearing_jacobian(&p.pose, lm.mean)?;
                let pht = &lm.cov * &hm.transpose();
                let mut s = &(&hm * &pht) + r_obs;
                s.symmetrize();
                let chol = cholesky(&s)
                    .map_err(|e| NavError::NumericalFailure(format!("landmark innovation: {e}")))?;
                let k = cholesky_solve(&chol, &pht.transpose()).transpose();
                let innov = [obs.range - pred.range, wrap(obs.bearing - pred.bearing)];
                lm.mean.0 += k[(0, 0)] * innov[0] + k[(0, 1)] * innov[1];
                lm.mean.1 += k[(1, 0)] * innov[0] + k[(1, 1)] * innov[1];
                lm.cov = joseph_update(&lm.cov, &k, &hm, r_obs);
            }
            None => {
                let mean = landmark_init(&p.pose, obs);
                let (_, gz) = landmark_init_jacobian(&p.pose, obs);
                let mut cov = &(&gz * r_obs) * &gz.transpose();
                cov.symmetrize();
                p.landmarks.insert(id, LandmarkEstimate { mean, cov });
            }
        }
    }
    Ok(())
}

/// One FastSLAM 2.0 cycle over the whole particle set.
///
/// Particle `i` draws from `RngStream::substream(key, i)` where `key` is the
/// next value of `rng`, so the result does not depend on processing order.
pub fn fastslam2_step(
    particles: &[FastSlamParticle],
    u: (f64, f64),
    dt: f64,
    z: &[RangeBearing],
    noise: &FastSlamNoise,
    rng: &mut RngStream,
) -> Result<Vec<FastSlamParticle>> {
    if particles.is_empty() {
        return Err(NavError::invalid("need at least one particle"));
    }
    if !(dt > 0.0) {
        return Err(NavError::invalid(format!("dt = {dt} must be positive")));
    }
    if z.iter().any(|o| o.landmark_id.is_none()) {
        return Err(NavError::invalid("SLAM observations need a landmark id"));
    }
    let r_obs = noise.r_obs();
    let key = rng.next_u64();

    let mut next = Vec::with_capacity(particles.len());
    let mut log_w = Vec::with_capacity(particles.len());
    for (i, p) in particles.iter().enumerate() {
        let mut sub = RngStream::substream(key, i as u64);
        let (pose, log_evidence) = propose(p, u, dt, z, noise, &r_obs, &mut sub)?;
        let mut q = FastSlamParticle {
            pose,
            weight: p.weight,
            landmarks: p.landmarks.clone(),
        };
        update_map(&mut q, z, &r_obs)?;
        log_w.push(p.weight.ln() + log_evidence);
        next.push(q);
    }

    let weights = normalize_log_weights(&log_w)?;
    for (q, w) in next.iter_mut().zip(weights) {
        q.weight = w;
    }
    let sq: f64 = next.iter().map(|q| q.weight * q.weight).sum();
    let ess = (1.0 / sq).clamp(1.0, next.len() as f64);
    if ess < next.len() as f64 / 2.0 {
        next = resample(&next, rng);
    }
    Ok(next)
}

fn resample(particles: &[FastSlamParticle], rng: &mut RngStream) -> Vec<FastSlamParticle> {
    let n = particles.len();
    let offset = rng.uniform();
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    let mut cumulative = particles[0].weight;
    for m in 0..n {
        let u = (offset + m as f64) / n as f64;
        while u >= cumulative && i < n - 1 {
            i += 1;
            cumulative += particles[i].weight;
        }
        let mut q = particles[i].clone();
        q.weight = 1.0 / n as f64;
        out.push(q);
    }
    out
}

/// Weighted mean pose with circular-mean yaw.
pub fn fastslam_estimate(particles: &[FastSlamParticle]) -> Pose2D {
    let (mut x, mut y, mut s, mut c) = (0.0, 0.0, 0.0, 0.0);
    for p in particles {
        x += p.weight * p.pose.x;
        y += p.weight * p.pose.y;
        s += p.weight * p.pose.yaw.sin();
        c += p.weight * p.pose.yaw.cos();
    }
    Pose2D {
        x,
        y,
        yaw: s.atan2(c),
    }
}

/// Particle with the largest weight (first on ties).
pub fn best_particle(particles: &[FastSlamParticle]) -> &FastSlamParticle {
    particles.iter().fold(
        &particles[0],
        |best, p| if p.weight > best.weight { p } else { best },
    )
}
