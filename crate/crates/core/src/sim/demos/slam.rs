use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, TAU};

use super::{dist, AtTrace, DemoOutput, DemoResult, LandmarkTable};
use crate::navcore::{
    motion_unicycle, move_pose, observe_range_bearing, Mat, Pose2D, RangeBearing, RngStream,
    VehicleState,
};
use crate::sim::config::ScenarioConfig;
use crate::sim::svg::Series;
use crate::sim::trace::TraceTable;
use crate::slam::{
    best_particle, ekf_slam_step, fastslam2_step, fastslam_estimate, fastslam_init, EkfSlamState,
    FastSlamNoise,
};
use crate::NavError;

type Params = BTreeMap<&'static str, f64>;

pub(super) const EKF_SLAM_PARAMS: &[(&str, f64)] = &[
    ("v", 1.0),
    ("omega", 0.1),
    ("v_std", 0.1),
    ("omega_std", 0.05),
    ("range_std", 0.2),
    ("bearing_std", 0.03),
    ("max_range", 20.0),
];

pub(super) const FASTSLAM_PARAMS: &[(&str, f64)] = &[
    ("n_particles", 30.0),
    ("v", 1.0),
    ("omega", 0.1),
    ("v_std", 0.1),
    ("omega_std", 0.05),
    ("range_std", 0.2),
    ("bearing_std", 0.03),
    ("max_range", 20.0),
];

/// Eight landmarks on a 20 m circle and the start pose (10, 0, pi/2), from
/// which (v, omega) = (1, 0.1) drives a 10 m circle around them.
pub fn slam_world() -> (Vec<(f64, f64)>, Pose2D) {
    let lms = (0..8)
        .map(|i| {
            let a = TAU * i as f64 / 8.0;
            (20.0 * a.cos(), 20.0 * a.sin())
        })
        .collect();
    (lms, Pose2D::new(10.0, 0.0, FRAC_PI_2))
}

fn observe(
    rng: &mut RngStream,
    truth: &Pose2D,
    lms: &[(f64, f64)],
    p: &Params,
) -> crate::Result<Vec<RangeBearing>> {
    let mut z = Vec::new();
    for (id, lm) in lms.iter().enumerate() {
        let exact = observe_range_bearing(truth, *lm)?;
        if exact.range <= p["max_range"] {
            z.push(RangeBearing {
                range: rng.gaussian(exact.range, p["range_std"])?,
                bearing: rng.gaussian(exact.bearing, p["bearing_std"])?,
                landmark_id: Some(id),
            });
        }
    }
    Ok(z)
}

const COLUMNS: [&str; 15] = [
    "x_true",
    "y_true",
    "yaw_true",
    "x_est",
    "y_est",
    "yaw_est",
    "x_dr",
    "y_dr",
    "yaw_dr",
    "n_landmarks",
    "ess",
    "err_est",
    "err_dr",
    "err_landmarks",
    "cov_asymmetry",
];

/// RMS landmark position error over the ids in `est`.
fn landmark_rmse(est: &[(usize, (f64, f64))], truth: &[(f64, f64)]) -> f64 {
    if est.is_empty() {
        return 0.0;
    }
    let s: f64 = est.iter().map(|(id, m)| dist(*m, truth[*id]).powi(2)).sum();
    (s / est.len() as f64).sqrt()
}

fn landmark_table(est: &[(usize, (f64, f64))], truth: &[(f64, f64)]) -> LandmarkTable {
    LandmarkTable {
        rows: est
            .iter()
            .map(|(id, m)| {
                let t = truth[*id];
                [*id as f64, t.0, t.1, m.0, m.1, dist(*m, t)]
            })
            .collect(),
    }
}

fn series(trace: &TraceTable, est: &[(usize, (f64, f64))], truth: &[(f64, f64)]) -> Vec<Series> {
    let xy = |a: &str, b: &str| {
        trace
            .column(a)
            .expect("x")
            .into_iter()
            .zip(trace.column(b).expect("y"))
            .collect()
    };
    let mut lm_true = truth.to_vec();
    lm_true.push(truth[0]);
    let mut out = vec![
        Series::new("truth", xy("x_true", "y_true")),
        Series::new("estimate", xy("x_est", "y_est")),
        Series::new("dead reckoning", xy("x_dr", "y_dr")),
        Series::new("landmarks", lm_true),
    ];
    if !est.is_empty() {
        let mut pts: Vec<(f64, f64)> = est.iter().map(|(_, m)| *m).collect();
        pts.push(pts[0]);
        out.push(Series::new("landmark estimates", pts));
    }
    out
}

fn row(
    truth: &Pose2D,
    e: &Pose2D,
    dr: &Pose2D,
    n_lm: usize,
    ess: f64,
    lm_err: f64,
    asym: f64,
) -> Vec<f64> {
    let t = (truth.x, truth.y);
    vec![
        truth.x,
        truth.y,
        truth.yaw,
        e.x,
        e.y,
        e.yaw,
        dr.x,
        dr.y,
        dr.yaw,
        n_lm as f64,
        ess,
        dist(t, (e.x, e.y)),
        dist(t, (dr.x, dr.y)),
        lm_err,
        asym,
    ]
}

pub(super) fn ekf(cfg: &ScenarioConfig, p: &Params) -> DemoResult {
    let dt = cfg.dt;
    let (lms, start) = slam_world();
    let mut rng = RngStream::new(cfg.seed);
    let mut trace = TraceTable::new(&COLUMNS)?;
    let mut truth = VehicleState {
        pose: start,
        v: p["v"],
    };
    let mut dr = start;
    let mut s = EkfSlamState::new(start, Mat::zeros(3, 3))?;
    let m = Mat::from_diag(&[p["v_std"].powi(2), p["omega_std"].powi(2)]);
    let r_obs = Mat::from_diag(&[p["range_std"].powi(2), p["bearing_std"].powi(2)]);
    let estimates = |s: &EkfSlamState| -> Vec<(usize, (f64, f64))> {
        s.registry
            .keys()
            .map(|&id| (id, s.landmark(id).expect("registered")))
            .collect()
    };

    trace.push(0.0, &row(&start, &start, &dr, 0, 1.0, 0.0, 0.0))?;
    for k in 1..=cfg.steps() {
        truth = motion_unicycle(&truth, p["v"], p["omega"], dt).at(&trace)?;
        let u = (
            rng.gaussian(p["v"], p["v_std"]).at(&trace)?,
            rng.gaussian(p["omega"], p["omega_std"]).at(&trace)?,
        );
        dr = move_pose(&dr, u.0, u.1, dt);
        let z = observe(&mut rng, &truth.pose, &lms, p).at(&trace)?;
        let yaw = s.pose().yaw;
        let v_map = Mat::from_rows(&[[yaw.cos() * dt, 0.0], [yaw.sin() * dt, 0.0], [0.0, dt]]);
        let q = &(&v_map * &m) * &v_map.transpose();
        s = ekf_slam_step(&s, u, dt, &z, &q, &r_obs).at(&trace)?;
        let est = estimates(&s);
        let asym = s.belief.cov.asymmetry();
        trace.push(
            k as f64 * dt,
            &row(
                &truth.pose,
                &s.pose(),
                &dr,
                est.len(),
                1.0,
                landmark_rmse(&est, &lms),
                asym,
            ),
        )?;
    }
    let est = estimates(&s);
    Ok(DemoOutput {
        series: series(&trace, &est, &lms),
        trace,
        grid: None,
        landmarks: Some(landmark_table(&est, &lms)),
    })
}

pub(super) fn fastslam(cfg: &ScenarioConfig, p: &Params) -> DemoResult {
    let dt = cfg.dt;
    let n = p["n_particles"];
    if !(n >= 1.0) {
        return Err(NavError::invalid("n_particles must be at least 1").into());
    }
    let (lms, start) = slam_world();
    let noise = FastSlamNoise {
        v_std: p["v_std"],
        omega_std: p["omega_std"],
        range_std: p["range_std"],
        bearing_std: p["bearing_std"],
    };
    let mut rng = RngStream::new(cfg.seed);
    let mut trace = TraceTable::new(&COLUMNS)?;
    let mut truth = VehicleState {
        pose: start,
        v: p["v"],
    };
    let mut dr = start;
    let mut particles = fastslam_init(start, n as usize)?;
    let estimates = |ps: &[crate::slam::FastSlamParticle]| -> Vec<(usize, (f64, f64))> {
        best_particle(ps)
            .landmarks
            .iter()
            .map(|(id, l)| (*id, l.mean))
            .collect()
    };

    trace.push(0.0, &row(&start, &start, &dr, 0, n, 0.0, 0.0))?;
    for k in 1..=cfg.steps() {
        truth = motion_unicycle(&truth, p["v"], p["omega"], dt).at(&trace)?;
        let u = (
            rng.gaussian(p["v"], p["v_std"]).at(&trace)?,
            rng.gaussian(p["omega"], p["omega_std"]).at(&trace)?,
        );
        dr = move_pose(&dr, u.0, u.1, dt);
        let z = observe(&mut rng, &truth.pose, &lms, p).at(&trace)?;
        particles = fastslam2_step(&particles, u, dt, &z, &noise, &mut rng).at(&trace)?;
        let est = estimates(&particles);
        let sq: f64 = particles.iter().map(|q| q.weight * q.weight).sum();
        let ess = (1.0 / sq).clamp(1.0, particles.len() as f64);
        trace.push(
            k as f64 * dt,
            &row(
                &truth.pose,
                &fastslam_estimate(&particles),
                &dr,
                est.len(),
                ess,
                landmark_rmse(&est, &lms),
                0.0,
            ),
        )?;
    }
    let est = estimates(&particles);
    Ok(DemoOutput {
        series: series(&trace, &est, &lms),
        trace,
        grid: None,
        landmarks: Some(landmark_table(&est, &lms)),
    })
}
