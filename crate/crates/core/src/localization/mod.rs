//! Pose estimation from noisy odometry plus observations: an extended Kalman
//! filter on GNSS-like fixes, a particle filter on range/bearing to known
//! landmarks, and a 2D histogram filter on landmark ranges.

pub mod ekf;
pub mod histogram;
pub mod particle;

pub use ekf::{ekf_predict, ekf_update, EkfBelief};
pub use histogram::{hf_predict, hf_update, HistogramBelief};
pub use particle::{
    effective_sample_size, pf_step, resample_low_variance, Particle, ParticleSet, PfNoise,
};
