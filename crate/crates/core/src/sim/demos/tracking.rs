use std::collections::BTreeMap;

use super::{AtTrace, DemoOutput, DemoResult};
use crate::navcore::{motion_bicycle, Pose2D, VehicleState};
use crate::sim::config::ScenarioConfig;
use crate::sim::svg::Series;
use crate::sim::trace::TraceTable;
use crate::tracking::{
    mpc_track_step, nearest_path_point, pid_step, rear_wheel_feedback, reference_window,
};
use crate::tracking::{MpcParams, PidState, RearWheelGains, ReferencePath};
use crate::NavError;

type Params = BTreeMap<&'static str, f64>;

pub(super) const REAR_WHEEL_PARAMS: &[(&str, f64)] = &[
    ("target_speed", 2.0),
    ("offset", 0.0),
    ("k_theta", 1.0),
    ("k_e", 0.5),
    ("kp", 1.0),
    ("ki", 0.1),
    ("kd", 0.0),
    ("a_max", 1.0),
];

pub(super) const MPC_PARAMS: &[(&str, f64)] = &[
    ("target_speed", 2.0),
    ("offset", 0.0),
    ("wheelbase", 2.5),
    ("horizon", 5.0),
];

const COLUMNS: [&str; 10] = [
    "x",
    "y",
    "yaw",
    "v",
    "accel",
    "steer",
    "cross_track",
    "heading_error",
    "err_cross_track",
    "err_speed",
];

/// Canonical course long enough for the whole run, with 20 m to spare.
fn course(cfg: &ScenarioConfig, speed: f64) -> crate::Result<ReferencePath> {
    if !(speed > 0.0) {
        return Err(NavError::invalid("target_speed must be positive"));
    }
    ReferencePath::canonical(speed, speed * cfg.duration + 20.0)
}

/// Start `offset` meters left of the first waypoint, aligned with it.
fn start_pose(path: &ReferencePath, offset: f64) -> Pose2D {
    let w = &path.waypoints[0];
    Pose2D::new(
        w.x - offset * w.yaw.sin(),
        w.y + offset * w.yaw.cos(),
        w.yaw,
    )
}

fn row(s: &VehicleState, accel: f64, steer: f64, e: f64, th: f64, target: f64) -> Vec<f64> {
    vec![
        s.pose.x,
        s.pose.y,
        s.pose.yaw,
        s.v,
        accel,
        steer,
        e,
        th,
        e.abs(),
        (s.v - target).abs(),
    ]
}

fn series(path: &ReferencePath, trace: &TraceTable) -> Vec<Series> {
    let reference = path.waypoints.iter().map(|w| (w.x, w.y)).collect();
    let robot = trace
        .column("x")
        .expect("x")
        .into_iter()
        .zip(trace.column("y").expect("y"))
        .collect();
    vec![
        Series::new("reference", reference),
        Series::new("robot", robot),
    ]
}

/// Unicycle with rear-wheel feedback steering and PID on acceleration.
/// The `steer` column holds the commanded yaw rate.
pub(super) fn rear_wheel(cfg: &ScenarioConfig, p: &Params) -> DemoResult {
    let dt = cfg.dt;
    let target = p["target_speed"];
    let path = course(cfg, target)?;
    let gains = RearWheelGains {
        k_theta: p["k_theta"],
        k_e: p["k_e"],
    };
    let mut pid = PidState::new(p["kp"], p["ki"], p["kd"], -p["a_max"], p["a_max"])?;
    let mut s = VehicleState {
        pose: start_pose(&path, p["offset"]),
        v: 0.0,
    };
    let mut trace = TraceTable::new(&COLUMNS)?;

    for k in 0..=cfg.steps() {
        let (idx, e, th) = nearest_path_point(&s.pose, &path);
        let kappa = path.waypoints[idx].curvature;
        let omega = rear_wheel_feedback(s.v, e, th, kappa, gains).at(&trace)?;
        let (accel, next_pid) = pid_step(&pid, target - s.v, dt).at(&trace)?;
        trace.push(k as f64 * dt, &row(&s, accel, omega, e, th, target))?;
        if k == cfg.steps() {
            break;
        }
        pid = next_pid;
        let v = s.v + accel * dt;
        let pose = crate::navcore::move_pose(&s.pose, s.v, omega, dt);
        s = VehicleState { pose, v };
    }
    Ok(DemoOutput {
        series: series(&path, &trace),
        trace,
        grid: None,
        landmarks: None,
    })
}

/// Kinematic bicycle driven by the iterative linear MPC, warm-started with
/// the previous solution shifted by one step.
pub(super) fn mpc(cfg: &ScenarioConfig, p: &Params) -> DemoResult {
    let dt = cfg.dt;
    let target = p["target_speed"];
    let wheelbase = p["wheelbase"];
    if !(p["horizon"] >= 1.0) {
        return Err(NavError::invalid("horizon must be at least 1").into());
    }
    let params = MpcParams {
        horizon: p["horizon"] as usize,
        ..MpcParams::default()
    };
    let path = course(cfg, target)?;
    let mut s = VehicleState {
        pose: start_pose(&path, p["offset"]),
        v: 0.0,
    };
    let mut trace = TraceTable::new(&COLUMNS)?;
    let mut warm: Option<Vec<(f64, f64)>> = None;

    for k in 0..=cfg.steps() {
        let (idx, e, th) = nearest_path_point(&s.pose, &path);
        let z = [s.pose.x, s.pose.y, s.v, s.pose.yaw];
        let window = reference_window(&path, idx, params.horizon, dt, s.pose.yaw);
        let out =
            mpc_track_step(&z, &window, &params, wheelbase, dt, warm.as_deref()).at(&trace)?;
        trace.push(k as f64 * dt, &row(&s, out.accel, out.steer, e, th, target))?;
        if k == cfg.steps() {
            break;
        }
        s = motion_bicycle(&s, out.accel, out.steer, wheelbase, dt).at(&trace)?;
        let mut shifted = out.inputs[1..].to_vec();
        shifted.push(*out.inputs.last().expect("horizon >= 1"));
        warm = Some(shifted);
    }
    Ok(DemoOutput {
        series: series(&path, &trace),
        trace,
        grid: None,
        landmarks: None,
    })
}
