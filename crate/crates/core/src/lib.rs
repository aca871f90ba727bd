//! Autonomous-navigation algorithms with a deterministic scenario runner.
//!
//! The crate is split by technical category:
//!
//! - [`navcore`]: angles, small dense linear algebra, Riccati solver, RNG, models
//! - [`localization`]: EKF, particle filter, histogram filter
//! - [`mapping`]: log-odds occupancy grids with ray casting, k-means clustering
//! - [`slam`]: EKF-SLAM and FastSLAM 2.0 with known correspondences
//! - [`planning`]: Dijkstra/A*, potential fields, RRT*, LQR-RRT*
//! - [`tracking`]: PID, rear-wheel feedback, iterative linear MPC on a dense ADMM QP solver
//! - [`sim`]: seeded demo scenarios, CSV traces, SVG plots, PGM maps
//!
//! No external math crates are used; everything numeric lives here.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod localization;
pub mod mapping;
pub mod navcore;
pub mod planning;
pub mod sim;
pub mod slam;
pub mod tracking;

pub use error::{NavError, Result};
