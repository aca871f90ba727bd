//! Path tracking: PID speed control, rear-wheel feedback steering and
//! iterative linear MPC with its dense ADMM QP solver.

pub mod mpc;
pub mod path;
pub mod pid;
pub mod qp;
pub mod rear_wheel;

pub use mpc::{linearize_bicycle, mpc_track_step, MpcOutput, MpcParams};
pub use path::{nearest_path_point, reference_window, PathPoint, ReferencePath};
pub use pid::{pid_step, PidState};
pub use qp::{qp_solve_admm, AdmmParams, Qp, QpSolution, QpStatus};
pub use rear_wheel::{rear_wheel_feedback, RearWheelGains};
