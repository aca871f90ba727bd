use crate::error::{NavError, Result};
use crate::navcore::{move_pose, observe_range_bearing, wrap, Pose2D, RangeBearing, RngStream};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Particle {
    pub pose: Pose2D,
    pub weight: f64,
}

/// Weighted pose hypotheses. Weights sum to one after every operation here.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleSet {
    pub particles: Vec<Particle>,
}

impl ParticleSet {
    /// `n` copies of `pose` with uniform weight.
    pub fn uniform_at(pose: Pose2D, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(NavError::invalid(
                "particle set needs at least one particle",
            ));
        }
        let w = 1.0 / n as f64;
        Ok(ParticleSet {
            particles: vec![Particle { pose, weight: w }; n],
        })
    }

    pub fn from_poses(poses: &[Pose2D]) -> Result<Self> {
        if poses.is_empty() {
            return Err(NavError::invalid(
                "particle set needs at least one particle",
            ));
        }
        let w = 1.0 / poses.len() as f64;
        Ok(ParticleSet {
            particles: poses
                .iter()
                .map(|&pose| Particle { pose, weight: w })
                .collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.particles.iter().map(|p| p.weight).sum()
    }

    /// Weighted mean pose; yaw is the circular mean.
    pub fn estimate(&self) -> Pose2D {
        let (mut x, mut y, mut s, mut c) = (0.0, 0.0, 0.0, 0.0);
        for p in &self.particles {
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
}

/// Noise model used by [`pf_step`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PfNoise {
    /// std of the speed command (m/s)
    pub v_std: f64,
    /// std of the yaw-rate command (rad/s)
    pub omega_std: f64,
    pub range_std: f64,
    pub bearing_std: f64,
}

impl Default for PfNoise {
    fn default() -> Self {
        PfNoise {
            v_std: 0.1,
            omega_std: 0.05,
            range_std: 0.2,
            bearing_std: 0.03,
        }
    }
}

/// 1 / sum(w_i^2), clamped into [1, N].
pub fn effective_sample_size(p: &ParticleSet) -> f64 {
    let sq: f64 = p.particles.iter().map(|q| q.weight * q.weight).sum();
    (1.0 / sq).clamp(1.0, p.len() as f64)
}

/// Systematic resampling: one offset in [0, 1/N), stride 1/N.
pub fn resample_low_variance(p: &ParticleSet, rng: &mut RngStream) -> ParticleSet {
    let n = p.len();
    let offset = rng.uniform();
    let w = 1.0 / n as f64;
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    let mut cumulative = p.particles[0].weight;
    for m in 0..n {
        let u = (offset + m as f64) / n as f64;
        while u >= cumulative && i < n - 1 {
            i += 1;
            cumulative += p.particles[i].weight;
        }
        out.push(Particle {
            pose: p.particles[i].pose,
            weight: w,
        });
    }
    ParticleSet { particles: out }
}

/// Normalizes log-weights in place (max-shifted) and returns the particle
/// weights. Fails if every weight is zero or non-finite.
pub(crate) fn normalize_log_weights(log_w: &[f64]) -> Result<Vec<f64>> {
    let max = log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return Err(NavError::DegenerateBelief);
    }
    let w: Vec<f64> = log_w.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = w.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return Err(NavError::DegenerateBelief);
    }
    Ok(w.into_iter().map(|x| x / total).collect())
}

/// One particle-filter cycle: sample motion, weight by range/bearing
/// likelihoods, renormalize, and resample when ESS < N/2.
#[allow(clippy::too_many_arguments)]
pub fn pf_step(
    p: &ParticleSet,
    u: (f64, f64),
    dt: f64,
    landmarks: &[(f64, f64)],
    z: &[RangeBearing],
    noise: &PfNoise,
    rng: &mut RngStream,
) -> Result<ParticleSet> {
    if p.is_empty() {
        return Err(NavError::invalid("empty particle set"));
    }
    if !(dt > 0.0) {
        return Err(NavError::invalid(format!("dt = {dt} must be positive")));
    }
    for obs in z {
        match obs.landmark_id {
            Some(id) if id < landmarks.len() => {}
            other => {
                return Err(NavError::invalid(format!(
                    "observation refers to unknown landmark {other:?}"
                )))
            }
        }
    }

    let mut moved = Vec::with_capacity(p.len());
    for q in &p.particles {
        let v = rng.gaussian(u.0, noise.v_std)?;
        let w = rng.gaussian(u.1, noise.omega_std)?;
        moved.push(move_pose(&q.pose, v, w, dt));
    }

    if z.is_empty() {
        let total: f64 = p.particles.iter().map(|q| q.weight).sum();
        if !(total > 0.0) {
            return Err(NavError::DegenerateBelief);
        }
        let particles = moved
            .into_iter()
            .zip(&p.particles)
            .map(|(pose, q)| Particle {
                pose,
                weight: q.weight / total,
            })
            .collect();
        return finish(ParticleSet { particles }, rng);
    }

    let mut log_w = Vec::with_capacity(p.len());
    for (pose, q) in moved.iter().zip(&p.particles) {
        let mut lw = q.weight.ln();
        for obs in z {
            let lm = landmarks[obs.landmark_id.unwrap()];
            let pred = observe_range_bearing(pose, lm)?;
            let dr = (obs.range - pred.range) / noise.range_std;
            let db = wrap(obs.bearing - pred.bearing) / noise.bearing_std;
            lw += -0.5 * (dr * dr + db * db);
        }
        log_w.push(lw);
    }
    let weights = normalize_log_weights(&log_w)?;
    let particles = moved
        .into_iter()
        .zip(weights)
        .map(|(pose, weight)| Particle { pose, weight })
        .collect();
    finish(ParticleSet { particles }, rng)
}

fn finish(set: ParticleSet, rng: &mut RngStream) -> Result<ParticleSet> {
    if effective_sample_size(&set) < set.len() as f64 / 2.0 {
        Ok(resample_low_variance(&set, rng))
    } else {
        Ok(set)
    }
}
