use std::collections::BTreeMap;

use crate::error::{NavError, Result};
use crate::localization::ekf::joseph_update;
use crate::navcore::linalg::{cholesky, cholesky_solve, Mat};
use crate::navcore::{
    move_pose, observe_range_bearing, range_bearing_jacobian, wrap, GaussianBelief, Pose2D,
    RangeBearing,
};

/// Landmark position from a pose and a range/bearing measurement.
pub fn landmark_init(p: &Pose2D, z: &RangeBearing) -> (f64, f64) {
    let a = p.yaw + z.bearing;
    (p.x + z.range * a.cos(), p.y + z.range * a.sin())
}

/// Jacobians of [`landmark_init`]: 2x3 over the pose and 2x2 over (range, bearing).
pub fn landmark_init_jacobian(p: &Pose2D, z: &RangeBearing) -> (Mat, Mat) {
    let a = p.yaw + z.bearing;
    let (s, c) = a.sin_cos();
    let g_pose = Mat::from_rows(&[[1.0, 0.0, -z.range * s], [0.0, 1.0, z.range * c]]);
    let g_z = Mat::from_rows(&[[c, -z.range * s], [s, z.range * c]]);
    (g_pose, g_z)
}

/// Joint Gaussian over (x, y, yaw, lm1x, lm1y, ...). `registry` maps a
/// landmark id to its slot (0-based landmark index).
#[derive(Debug, Clone, PartialEq)]
pub struct EkfSlamState {
    pub belief: GaussianBelief,
    pub registry: BTreeMap<usize, usize>,
}

impl EkfSlamState {
    pub fn new(pose: Pose2D, pose_cov: Mat) -> Result<Self> {
        if pose_cov.shape() != (3, 3) {
            return Err(NavError::invalid("pose covariance must be 3x3"));
        }
        Ok(EkfSlamState {
            belief: GaussianBelief::new(vec![pose.x, pose.y, pose.yaw], pose_cov)?,
            registry: BTreeMap::new(),
        })
    }

    pub fn pose(&self) -> Pose2D {
        let m = &self.belief.mean;
        Pose2D {
            x: m[0],
            y: m[1],
            yaw: m[2],
        }
    }

    pub fn landmark_count(&self) -> usize {
        self.registry.len()
    }

    pub fn landmark(&self, id: usize) -> Option<(f64, f64)> {
        self.registry.get(&id).map(|&slot| {
            let i = 3 + 2 * slot;
            (self.belief.mean[i], self.belief.mean[i + 1])
        })
    }

    /// 2x2 covariance block of landmark `id`.
    pub fn landmark_cov(&self, id: usize) -> Option<Mat> {
        self.registry
            .get(&id)
            .map(|&slot| self.belief.cov.block(3 + 2 * slot, 3 + 2 * slot, 2, 2))
    }

    fn predict(&mut self, u: (f64, f64), dt: f64, q_pose: &Mat) {
        let pose = self.pose();
        let next = move_pose(&pose, u.0, u.1, dt);
        self.belief.mean[0] = next.x;
        self.belief.mean[1] = next.y;
        self.belief.mean[2] = next.yaw;

        let mut g = Mat::identity(3);
        g[(0, 2)] = -u.0 * pose.yaw.sin() * dt;
        g[(1, 2)] = u.0 * pose.yaw.cos() * dt;
        let n = self.belief.dim();
        let p = &self.belief.cov;
        let prr = p.block(0, 0, 3, 3);
        let new_prr = &(&(&g * &prr) * &g.transpose()) + q_pose;
        let mut cov = p.clone();
        cov.set_block(0, 0, &new_prr);
        if n > 3 {
            let prm = p.block(0, 3, 3, n - 3);
            let new_prm = &g * &prm;
            cov.set_block(0, 3, &new_prm);
            cov.set_block(3, 0, &new_prm.transpose());
        }
        cov.symmetrize();
        self.belief.cov = cov;
    }

    fn augment(&mut self, id: usize, z: &RangeBearing, r_obs: &Mat) {
        let pose = self.pose();
        let lm = landmark_init(&pose, z);
        let (g_pose, g_z) = landmark_init_jacobian(&pose, z);
        let n = self.belief.dim();
        let p = &self.belief.cov;
        // cross-covariance of the new landmark with the existing state
        let p_top = p.block(0, 0, 3, n);
        let cross = &g_pose * &p_top;
        let prr = p.block(0, 0, 3, 3);
        let mut pll =
            &(&(&g_pose * &prr) * &g_pose.transpose()) + &(&(&g_z * r_obs) * &g_z.transpose());
        pll.symmetrize();

        let mut cov = Mat::zeros(n + 2, n + 2);
        cov.set_block(0, 0, p);
        cov.set_block(n, 0, &cross);
        cov.set_block(0, n, &cross.transpose());
        cov.set_block(n, n, &pll);
        self.belief.cov = cov;
        self.belief.mean.push(lm.0);
        self.belief.mean.push(lm.1);
        self.registry.insert(id, (n - 3) / 2);
    }

    fn correct(&mut self, slot: usize, z: &RangeBearing, r_obs: &Mat) -> Result<()> {
        let n = self.belief.dim();
        let i = 3 + 2 * slot;
        let pose = self.pose();
        let lm = (self.belief.mean[i], self.belief.mean[i + 1]);
        let pred = observe_range_bearing(&pose, lm)?;
        let (h_pose, h_lm) = range_bearing_jacobian(&pose, lm)?;
        let mut h = Mat::zeros(2, n);
        h.set_block(0, 0, &h_pose);
        h.set_block(0, i, &h_lm);

        let p = &self.belief.cov;
        let pht = p * &h.transpose();
        let mut s = &(&h * &pht) + r_obs;
        s.symmetrize();
        let l = cholesky(&s).map_err(|e| {
            NavError::NumericalFailure(format!("innovation covariance singular: {e}"))
        })?;
        let k = cholesky_solve(&l, &pht.transpose()).transpose();
        let innov = [z.range - pred.range, wrap(z.bearing - pred.bearing)];
        for (j, m) in self.belief.mean.iter_mut().enumerate() {
            *m += k[(j, 0)] * innov[0] + k[(j, 1)] * innov[1];
        }
        self.belief.mean[2] = wrap(self.belief.mean[2]);
        self.belief.cov = joseph_update(p, &k, &h, r_obs);
        Ok(())
    }
}

/// One EKF-SLAM cycle: predict the pose block, then fold in each observation
/// in order (update if the id is known, augment the state otherwise).
pub fn ekf_slam_step(
    s: &EkfSlamState,
    u: (f64, f64),
    dt: f64,
    z: &[RangeBearing],
    q_pose: &Mat,
    r_obs: &Mat,
) -> Result<EkfSlamState> {
    if !(dt > 0.0) {
        return Err(NavError::invalid(format!("dt = {dt} must be positive")));
    }
    if q_pose.shape() != (3, 3) || r_obs.shape() != (2, 2) {
        return Err(NavError::invalid("Q_pose must be 3x3 and R_obs 2x2"));
    }
    if cholesky(r_obs).is_err() {
        return Err(NavError::invalid("R_obs must be positive definite"));
    }
    let mut next = s.clone();
    next.predict(u, dt, q_pose);
    for obs in z {
        let id = obs
            .landmark_id
            .ok_or_else(|| NavError::invalid("SLAM observations need a landmark id"))?;
        match next.registry.get(&id) {
            Some(&slot) => next.correct(slot, obs, r_obs)?,
            None => next.augment(id, obs, r_obs),
        }
    }
    Ok(next)
}
