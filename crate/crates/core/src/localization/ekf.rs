use crate::error::{NavError, Result};
use crate::navcore::linalg::{cholesky, cholesky_solve, Mat};
use crate::navcore::{motion_jacobian, motion_unicycle, wrap, GaussianBelief, VehicleState};

/// Gaussian belief over (x, y, yaw, v).
#[derive(Debug, Clone, PartialEq)]
pub struct EkfBelief {
    pub belief: GaussianBelief,
}

impl EkfBelief {
    pub fn new(state: VehicleState, cov: Mat) -> Result<Self> {
        if cov.shape() != (4, 4) {
            return Err(NavError::invalid("EKF covariance must be 4x4"));
        }
        Ok(EkfBelief {
            belief: GaussianBelief::new(state.to_vec().to_vec(), cov)?,
        })
    }

    pub fn state(&self) -> VehicleState {
        VehicleState::from_slice(&self.belief.mean)
    }

    pub fn cov(&self) -> &Mat {
        &self.belief.cov
    }
}

/// Propagates the belief through the unicycle model: `P' = F P F^T + Q`.
pub fn ekf_predict(b: &EkfBelief, u: (f64, f64), q: &Mat, dt: f64) -> Result<EkfBelief> {
    if q.shape() != (4, 4) {
        return Err(NavError::invalid(format!(
            "process noise must be 4x4, got {:?}",
            q.shape()
        )));
    }
    let state = b.state();
    let next = motion_unicycle(&state, u.0, u.1, dt)?;
    let f = motion_jacobian(&state, u.0, dt)?;
    let mut cov = &(&(&f * &b.belief.cov) * &f.transpose()) + q;
    cov.symmetrize();
    Ok(EkfBelief {
        belief: GaussianBelief {
            mean: next.to_vec().to_vec(),
            cov,
        },
    })
}

/// Kalman update with a position fix (x, y). Joseph-form covariance update.
pub fn ekf_update(b: &EkfBelief, z: (f64, f64), r: &Mat) -> Result<EkfBelief> {
    if r.shape() != (2, 2) {
        return Err(NavError::invalid("measurement noise must be 2x2"));
    }
    let p = &b.belief.cov;
    let mut h = Mat::zeros(2, 4);
    h[(0, 0)] = 1.0;
    h[(1, 1)] = 1.0;
    let pht = p * &h.transpose();
    let mut s = &(&h * &pht) + r;
    s.symmetrize();
    let l = cholesky(&s).map_err(|e| {
        NavError::NumericalFailure(format!("innovation covariance not invertible: {e}"))
    })?;
    // K = P H^T S^-1, computed as (S^-1 H P)^T
    let k = cholesky_solve(&l, &pht.transpose()).transpose();

    let mean = &b.belief.mean;
    let innov = [z.0 - mean[0], z.1 - mean[1]];
    let mut new_mean = mean.clone();
    for (i, m) in new_mean.iter_mut().enumerate() {
        *m += k[(i, 0)] * innov[0] + k[(i, 1)] * innov[1];
    }
    new_mean[2] = wrap(new_mean[2]);

    let cov = joseph_update(p, &k, &h, r);
    Ok(EkfBelief {
        belief: GaussianBelief {
            mean: new_mean,
            cov,
        },
    })
}

/// `(I - KH) P (I - KH)^T + K R K^T`, symmetrized.
pub(crate) fn joseph_update(p: &Mat, k: &Mat, h: &Mat, r: &Mat) -> Mat {
    let n = p.rows();
    let ikh = &Mat::identity(n) - &(k * h);
    let mut cov = &(&(&ikh * p) * &ikh.transpose()) + &(&(k * r) * &k.transpose());
    cov.symmetrize();
    cov
}

#[cfg(test)]
mod tests {
    use super::*;

    fn belief(cov: Mat) -> EkfBelief {
        EkfBelief::new(VehicleState::new(1.0, 2.0, 0.3, 0.0), cov).unwrap()
    }

    #[test]
    fn predict_fixed_point() {
        let b = belief(Mat::from_diag(&[0.5, 0.5, 0.1, 0.0]));
        let out = ekf_predict(&b, (0.0, 0.0), &Mat::zeros(4, 4), 0.1).unwrap();
        assert_eq!(out, b);
    }

    #[test]
    fn predict_adds_process_noise() {
        // velocity variance zero in the prior: nothing is dropped by F
        let b = belief(Mat::from_diag(&[0.5, 0.5, 0.1, 0.0]));
        let out = ekf_predict(&b, (1.0, 0.2), &Mat::identity(4), 0.1).unwrap();
        assert!(out.cov().trace() >= b.cov().trace() + 4.0);
        assert!(ekf_predict(&b, (1.0, 0.2), &Mat::identity(3), 0.1).is_err());
    }

    #[test]
    fn zero_innovation_keeps_mean() {
        let b = belief(Mat::from_diag(&[1.0, 1.0, 0.1, 0.1]));
        let out = ekf_update(&b, (1.0, 2.0), &Mat::identity(2)).unwrap();
        assert_eq!(out.belief.mean, b.belief.mean);
        assert!(out.cov().trace() <= b.cov().trace() + 1e-12);
    }

    #[test]
    fn uninformative_measurement() {
        let b = belief(Mat::from_diag(&[1.0, 1.0, 0.1, 0.1]));
        let out = ekf_update(&b, (50.0, -40.0), &Mat::identity(2).scale(1e12)).unwrap();
        let moved = (out.belief.mean[0] - 1.0).hypot(out.belief.mean[1] - 2.0);
        assert!(moved < 1e-6, "moved {moved}");
    }

    #[test]
    fn scalar_bayes_fusion() {
        let b = EkfBelief::new(
            VehicleState::default(),
            Mat::from_diag(&[1.0, 1.0, 1.0, 1.0]),
        )
        .unwrap();
        let out = ekf_update(&b, (1.0, 0.0), &Mat::identity(2)).unwrap();
        assert!((out.belief.mean[0] - 0.5).abs() < 1e-15);
        assert!((out.cov()[(0, 0)] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn singular_innovation_is_reported() {
        let b = belief(Mat::zeros(4, 4));
        let r = ekf_update(&b, (0.0, 0.0), &Mat::zeros(2, 2));
        assert!(matches!(r, Err(NavError::NumericalFailure(_))));
    }
}
