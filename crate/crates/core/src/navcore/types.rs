use serde::{Deserialize, Serialize};

use super::angle::wrap;
use super::linalg::Mat;
use crate::error::{NavError, Result};

/// Planar pose. `yaw` is kept in (-pi, pi] by the constructor.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Pose2D {
    pub x: f64,
    pub y: f64,
    pub yaw: f64,
}

impl Pose2D {
    pub fn new(x: f64, y: f64, yaw: f64) -> Self {
        Pose2D {
            x,
            y,
            yaw: wrap(yaw),
        }
    }

    pub fn distance_to(&self, other: &Pose2D) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct VehicleState {
    pub pose: Pose2D,
    pub v: f64,
}

impl VehicleState {
    pub fn new(x: f64, y: f64, yaw: f64, v: f64) -> Self {
        VehicleState {
            pose: Pose2D::new(x, y, yaw),
            v,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.pose.x.is_finite()
            && self.pose.y.is_finite()
            && self.pose.yaw.is_finite()
            && self.v.is_finite()
    }

    /// State as (x, y, yaw, v).
    pub fn to_vec(&self) -> [f64; 4] {
        [self.pose.x, self.pose.y, self.pose.yaw, self.v]
    }

    pub fn from_slice(s: &[f64]) -> Self {
        VehicleState::new(s[0], s[1], s[2], s[3])
    }
}

/// One range/bearing measurement, optionally tagged with the landmark it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeBearing {
    pub range: f64,
    pub bearing: f64,
    pub landmark_id: Option<usize>,
}

impl RangeBearing {
    pub fn new(range: f64, bearing: f64, landmark_id: Option<usize>) -> Result<Self> {
        if !(range > 0.0) || !range.is_finite() {
            return Err(NavError::invalid(format!("range {range} must be positive")));
        }
        Ok(RangeBearing {
            range,
            bearing: wrap(bearing),
            landmark_id,
        })
    }
}

/// Mean and covariance of a Gaussian state estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianBelief {
    pub mean: Vec<f64>,
    pub cov: Mat,
}

impl GaussianBelief {
    pub fn new(mean: Vec<f64>, cov: Mat) -> Result<Self> {
        if cov.shape() != (mean.len(), mean.len()) {
            return Err(NavError::invalid(format!(
                "covariance is {}x{} for a {}-dimensional mean",
                cov.rows(),
                cov.cols(),
                mean.len()
            )));
        }
        let b = GaussianBelief { mean, cov };
        b.check()?;
        Ok(b)
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    /// Symmetric within 1e-9 and minimum eigenvalue >= -1e-9.
    pub fn check(&self) -> Result<()> {
        if !self.cov.is_finite() || self.mean.iter().any(|v| !v.is_finite()) {
            return Err(NavError::NumericalFailure(
                "belief has non-finite entries".into(),
            ));
        }
        let asym = self.cov.asymmetry();
        if asym > 1e-9 {
            return Err(NavError::NumericalFailure(format!(
                "covariance asymmetry {asym:e}"
            )));
        }
        let min_eig = self.cov.min_symmetric_eigenvalue();
        if min_eig < -1e-9 {
            return Err(NavError::NumericalFailure(format!(
                "covariance min eigenvalue {min_eig:e}"
            )));
        }
        Ok(())
    }
}
