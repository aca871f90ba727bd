use std::collections::BTreeMap;

use super::{dist, AtTrace, DemoOutput, DemoResult};
use crate::localization::{
    effective_sample_size, ekf_predict, ekf_update, hf_predict, hf_update, pf_step,
};
use crate::localization::{EkfBelief, HistogramBelief, ParticleSet, PfNoise};
use crate::navcore::{
    motion_input_jacobian, motion_unicycle, observe_range_bearing, Mat, Pose2D, RangeBearing,
    RngStream, VehicleState,
};
use crate::sim::config::ScenarioConfig;
use crate::sim::svg::Series;
use crate::sim::trace::TraceTable;

type Params = BTreeMap<&'static str, f64>;

pub(super) const EKF_PARAMS: &[(&str, f64)] = &[
    ("v", 1.0),
    ("omega", 0.1),
    ("v_std", 0.2),
    ("omega_std", 0.1),
    ("gnss_std", 0.5),
];

pub(super) const PF_PARAMS: &[(&str, f64)] = &[
    ("n_particles", 100.0),
    ("v", 1.0),
    ("omega", 0.1),
    ("v_std", 0.1),
    ("omega_std", 0.05),
    ("range_std", 0.2),
    ("bearing_std", 0.03),
    ("max_range", 20.0),
];

pub(super) const HIST_PARAMS: &[(&str, f64)] = &[
    ("v", 1.0),
    ("omega", 0.1),
    ("v_std", 0.2),
    ("omega_std", 0.1),
    ("range_std", 0.3),
    ("motion_blur", 0.5),
    ("resolution", 0.5),
];

const LANDMARKS: [(f64, f64); 4] = [(10.0, 0.0), (10.0, 10.0), (0.0, 15.0), (-5.0, 20.0)];

const POSE_COLUMNS: [&str; 9] = [
    "x_true", "y_true", "yaw_true", "x_est", "y_est", "yaw_est", "x_dr", "y_dr", "yaw_dr",
];

fn columns(extra: &[&str]) -> Vec<String> {
    POSE_COLUMNS
        .iter()
        .chain(extra)
        .map(|s| s.to_string())
        .collect()
}

fn pose_row(truth: &Pose2D, est: &Pose2D, dr: &Pose2D) -> Vec<f64> {
    vec![
        truth.x, truth.y, truth.yaw, est.x, est.y, est.yaw, dr.x, dr.y, dr.yaw,
    ]
}

fn path_series(trace: &TraceTable) -> Vec<Series> {
    let xy = |a: &str, b: &str| {
        let xs = trace.column(a).expect("column");
        let ys = trace.column(b).expect("column");
        xs.into_iter().zip(ys).collect::<Vec<_>>()
    };
    vec![
        Series::new("truth", xy("x_true", "y_true")),
        Series::new("estimate", xy("x_est", "y_est")),
        Series::new("dead reckoning", xy("x_dr", "y_dr")),
    ]
}

fn landmark_series() -> Series {
    let mut pts = LANDMARKS.to_vec();
    pts.push(LANDMARKS[0]);
    Series::new("landmarks", pts)
}

/// Noisy odometry: commanded (v, omega) plus Gaussian noise, v drawn first.
fn odometry(
    rng: &mut RngStream,
    v: f64,
    omega: f64,
    v_std: f64,
    omega_std: f64,
) -> crate::Result<(f64, f64)> {
    Ok((rng.gaussian(v, v_std)?, rng.gaussian(omega, omega_std)?))
}

pub(super) fn ekf(cfg: &ScenarioConfig, p: &Params) -> DemoResult {
    let dt = cfg.dt;
    let mut rng = RngStream::new(cfg.seed);
    let mut trace = TraceTable::new(&columns(&[
        "gnss_x",
        "gnss_y",
        "cov_trace",
        "err_est",
        "err_dr",
    ]))?;
    let mut truth = VehicleState::new(0.0, 0.0, 0.0, p["v"]);
    let mut dr = truth;
    let mut est = EkfBelief::new(truth, Mat::from_diag(&[0.01, 0.01, 0.001, 0.01]))?;
    let m = Mat::from_diag(&[p["v_std"].powi(2), p["omega_std"].powi(2)]);
    let r = Mat::from_diag(&[p["gnss_std"].powi(2); 2]);

    let mut row = pose_row(&truth.pose, &est.state().pose, &dr.pose);
    row.extend([truth.pose.x, truth.pose.y, est.cov().trace(), 0.0, 0.0]);
    trace.push(0.0, &row)?;
    for k in 1..=cfg.steps() {
        truth = motion_unicycle(&truth, p["v"], p["omega"], dt).at(&trace)?;
        let u = odometry(&mut rng, p["v"], p["omega"], p["v_std"], p["omega_std"]).at(&trace)?;
        dr = motion_unicycle(&dr, u.0, u.1, dt).at(&trace)?;
        let vm = motion_input_jacobian(&est.state(), dt);
        let q = &(&vm * &m) * &vm.transpose();
        est = ekf_predict(&est, u, &q, dt).at(&trace)?;
        let z = (
            rng.gaussian(truth.pose.x, p["gnss_std"]).at(&trace)?,
            rng.gaussian(truth.pose.y, p["gnss_std"]).at(&trace)?,
        );
        est = ekf_update(&est, z, &r).at(&trace)?;
        let e = est.state().pose;
        let mut row = pose_row(&truth.pose, &e, &dr.pose);
        let truth_xy = (truth.pose.x, truth.pose.y);
        row.extend([
            z.0,
            z.1,
            est.cov().trace(),
            dist(truth_xy, (e.x, e.y)),
            dist(truth_xy, (dr.pose.x, dr.pose.y)),
        ]);
        trace.push(k as f64 * dt, &row)?;
    }
    let series = path_series(&trace);
    Ok(DemoOutput {
        trace,
        series,
        grid: None,
        landmarks: None,
    })
}

fn observe_landmarks(
    rng: &mut RngStream,
    truth: &Pose2D,
    max_range: f64,
    noise: &PfNoise,
) -> crate::Result<Vec<RangeBearing>> {
    let mut z = Vec::new();
    for (id, lm) in LANDMARKS.iter().enumerate() {
        let exact = observe_range_bearing(truth, *lm)?;
        if exact.range <= max_range {
            z.push(RangeBearing {
                range: rng.gaussian(exact.range, noise.range_std)?,
                bearing: rng.gaussian(exact.bearing, noise.bearing_std)?,
                landmark_id: Some(id),
            });
        }
    }
    Ok(z)
}

pub(super) fn particle(cfg: &ScenarioConfig, p: &Params) -> DemoResult {
    let dt = cfg.dt;
    let n = p["n_particles"];
    if !(n >= 1.0) {
        return Err(crate::NavError::invalid("n_particles must be at least 1").into());
    }
    let noise = PfNoise {
        v_std: p["v_std"],
        omega_std: p["omega_std"],
        range_std: p["range_std"],
        bearing_std: p["bearing_std"],
    };
    let mut rng = RngStream::new(cfg.seed);
    let mut trace = TraceTable::new(&columns(&[
        "n_obs",
        "ess",
        "weight_sum",
        "err_est",
        "err_dr",
    ]))?;
    let mut truth = VehicleState::new(0.0, 0.0, 0.0, p["v"]);
    let mut dr = truth;
    let mut set = ParticleSet::uniform_at(truth.pose, n as usize)?;

    let mut row = pose_row(&truth.pose, &set.estimate(), &dr.pose);
    row.extend([
        0.0,
        effective_sample_size(&set),
        set.total_weight(),
        0.0,
        0.0,
    ]);
    trace.push(0.0, &row)?;
    for k in 1..=cfg.steps() {
        truth = motion_unicycle(&truth, p["v"], p["omega"], dt).at(&trace)?;
        let u = odometry(&mut rng, p["v"], p["omega"], noise.v_std, noise.omega_std).at(&trace)?;
        dr = motion_unicycle(&dr, u.0, u.1, dt).at(&trace)?;
        let z = observe_landmarks(&mut rng, &truth.pose, p["max_range"], &noise).at(&trace)?;
        set = pf_step(&set, u, dt, &LANDMARKS, &z, &noise, &mut rng).at(&trace)?;
        let e = set.estimate();
        let truth_xy = (truth.pose.x, truth.pose.y);
        let mut row = pose_row(&truth.pose, &e, &dr.pose);
        row.extend([
            z.len() as f64,
            effective_sample_size(&set),
            set.total_weight(),
            dist(truth_xy, (e.x, e.y)),
            dist(truth_xy, (dr.pose.x, dr.pose.y)),
        ]);
        trace.push(k as f64 * dt, &row)?;
    }
    let mut series = path_series(&trace);
    series.push(landmark_series());
    Ok(DemoOutput {
        trace,
        series,
        grid: None,
        landmarks: None,
    })
}

pub(super) fn histogram(cfg: &ScenarioConfig, p: &Params) -> DemoResult {
    let dt = cfg.dt;
    let res = p["resolution"];
    if !(res > 0.0) {
        return Err(crate::NavError::invalid("resolution must be positive").into());
    }
    // covers the 10 m radius circle driven from the origin with 5 m to spare
    let cells = (30.0 / res).ceil() as usize;
    let mut belief = HistogramBelief::uniform(cells, cells, res, (-15.0, -5.0))?;
    let mut rng = RngStream::new(cfg.seed);
    let mut trace = TraceTable::new(&columns(&["mass", "err_est", "err_dr"]))?;
    let mut truth = VehicleState::new(0.0, 0.0, 0.0, p["v"]);
    let mut dr = truth;
    // sub-cell displacement not yet applied to the belief
    let mut carry = (0.0, 0.0);

    let estimate = |b: &HistogramBelief, yaw: f64| {
        let (x, y) = b.mean();
        Pose2D { x, y, yaw }
    };
    let mut row = pose_row(&truth.pose, &estimate(&belief, truth.pose.yaw), &dr.pose);
    let m0 = belief.mean();
    row.extend([
        belief.total_mass(),
        dist(m0, (truth.pose.x, truth.pose.y)),
        0.0,
    ]);
    trace.push(0.0, &row)?;
    for k in 1..=cfg.steps() {
        let yaw = truth.pose.yaw;
        truth = motion_unicycle(&truth, p["v"], p["omega"], dt).at(&trace)?;
        let u = odometry(&mut rng, p["v"], p["omega"], p["v_std"], p["omega_std"]).at(&trace)?;
        dr = motion_unicycle(&dr, u.0, u.1, dt).at(&trace)?;

        carry.0 += u.0 * yaw.cos() * dt;
        carry.1 += u.0 * yaw.sin() * dt;
        let shift = (
            (carry.0 / res).round() as i64,
            (carry.1 / res).round() as i64,
        );
        carry.0 -= shift.0 as f64 * res;
        carry.1 -= shift.1 as f64 * res;
        belief = hf_predict(&belief, shift, p["motion_blur"]).at(&trace)?;

        let mut z = Vec::with_capacity(LANDMARKS.len());
        for lm in LANDMARKS {
            let r = dist(lm, (truth.pose.x, truth.pose.y));
            z.push((lm, rng.gaussian(r, p["range_std"]).at(&trace)?));
        }
        belief = hf_update(&belief, &z, p["range_std"]).at(&trace)?;

        let e = estimate(&belief, truth.pose.yaw);
        let truth_xy = (truth.pose.x, truth.pose.y);
        let mut row = pose_row(&truth.pose, &e, &dr.pose);
        row.extend([
            belief.total_mass(),
            dist(truth_xy, (e.x, e.y)),
            dist(truth_xy, (dr.pose.x, dr.pose.y)),
        ]);
        trace.push(k as f64 * dt, &row)?;
    }
    let mut series = path_series(&trace);
    series.push(landmark_series());
    Ok(DemoOutput {
        trace,
        series,
        grid: None,
        landmarks: None,
    })
}
