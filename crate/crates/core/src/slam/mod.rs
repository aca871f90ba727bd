//! Landmark SLAM: a joint EKF and FastSLAM 2.0.

pub mod ekf_slam;
pub mod fastslam;

pub use ekf_slam::{ekf_slam_step, landmark_init, landmark_init_jacobian, EkfSlamState};
pub use fastslam::{
    best_particle, fastslam2_step, fastslam_estimate, fastslam_init, FastSlamNoise,
    FastSlamParticle, LandmarkEstimate,
};
