//! Shared kernel: angles, dense linear algebra, Riccati/LQR, the portable RNG
//! and the motion/observation models every other module builds on.

pub mod angle;
pub mod linalg;
pub mod models;
pub mod riccati;
pub mod rng;
pub mod types;

pub use angle::{normalize_angle, wrap};
pub use linalg::{cholesky, inverse_spd, solve_spd, spectral_radius, Mat};
pub use models::{
    bicycle_jacobian, motion_bicycle, motion_input_jacobian, motion_jacobian, motion_unicycle,
    move_pose, observe_range_bearing, range_bearing_jacobian,
};
pub use riccati::{dare_residual, solve_dare};
pub use rng::{box_muller, sample_gaussian, RngStream};
pub use types::{GaussianBelief, Pose2D, RangeBearing, VehicleState};
