mod common;

use common::*;
use navsim::localization::{
    ekf_predict, hf_predict, hf_update, pf_step, EkfBelief, HistogramBelief, ParticleSet, PfNoise,
};
use navsim::mapping::kmeans_cluster;
use navsim::navcore::*;
use navsim::planning::plan_grid;
use navsim::tracking::{linearize_bicycle, qp_solve_admm, AdmmParams, Qp};

fn random_belief(rng: &mut RngStream) -> HistogramBelief {
    let mut h = HistogramBelief::uniform(5, 5, 1.0, (0.0, 0.0)).unwrap();
    for m in &mut h.mass {
        *m = rng.uniform() + 0.01;
    }
    let t: f64 = h.mass.iter().sum();
    for m in &mut h.mass {
        *m /= t;
    }
    h
}

#[test]
fn histogram_predict_matches_transition_matrix() {
    let mut rng = RngStream::new(1);
    for trial in 0..50 {
        let h = random_belief(&mut rng);
        let shift = ((trial % 5) as i64 - 2, (trial / 5 % 3) as i64 - 1);
        let std = [0.0, 0.4, 0.7][trial % 3];
        let got = hf_predict(&h, shift, std).unwrap();
        let want = histogram_predict_bayes(&h, shift, std);
        for (a, b) in got.mass.iter().zip(&want) {
            assert!((a - b).abs() < 1e-9, "trial {trial}: {a} vs {b}");
        }
    }
}

#[test]
fn histogram_update_matches_enumeration() {
    let mut rng = RngStream::new(2);
    for trial in 0..50 {
        let h = random_belief(&mut rng);
        let z: Vec<((f64, f64), f64)> = (0..3)
            .map(|_| {
                (
                    (rng.uniform_range(-2.0, 7.0), rng.uniform_range(-2.0, 7.0)),
                    rng.uniform_range(0.5, 5.0),
                )
            })
            .collect();
        let got = hf_update(&h, &z, 0.8).unwrap();
        let want = histogram_update_bayes(&h, &z, 0.8);
        for (a, b) in got.mass.iter().zip(&want) {
            assert!((a - b).abs() < 1e-9, "trial {trial}");
        }
    }
}

#[test]
fn kmeans_reaches_exhaustive_optimum() {
    let mut rng = RngStream::new(3);
    for trial in 0..30 {
        let n = 4 + trial % 5;
        let pts: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let c = if i % 2 == 0 { (0.0, 0.0) } else { (20.0, 5.0) };
                (
                    c.0 + rng.uniform_range(-1.0, 1.0),
                    c.1 + rng.uniform_range(-1.0, 1.0),
                )
            })
            .collect();
        let cl = kmeans_cluster(&pts, 2, &mut rng, 100).unwrap();
        let best = kmeans_exhaustive(&pts, 2);
        assert!(
            (cl.sse - best).abs() < 1e-9,
            "trial {trial}: {} vs {best}",
            cl.sse
        );
    }
}

#[test]
fn grid_planner_matches_brute_force() {
    let mut rng = RngStream::new(4);
    for trial in 0..100 {
        let w = random_world(&mut rng);
        let oracle = grid_brute_force(&w, (0, 0), (7, 7));
        for weight in [0.0, 1.0] {
            match (plan_grid(&w, (0, 0), (7, 7), weight), oracle) {
                (Ok(p), Some(c)) => assert!(
                    (p.cost - c).abs() < 1e-9,
                    "trial {trial}: {} vs {c}",
                    p.cost
                ),
                (Err(navsim::NavError::NoPath), None) => {}
                (r, o) => panic!("trial {trial}: planner {r:?}, oracle {o:?}"),
            }
        }
    }
}

fn random_qp(rng: &mut RngStream) -> Qp {
    let m = Mat::from_vec(3, 3, (0..9).map(|_| rng.uniform_range(-1.0, 1.0)).collect()).unwrap();
    let p = &(&m * &m.transpose()) + &Mat::identity(3).scale(0.5);
    let q = (0..3).map(|_| rng.uniform_range(-3.0, 3.0)).collect();
    let a = Mat::from_vec(3, 3, (0..9).map(|_| rng.uniform_range(-1.0, 1.0)).collect()).unwrap();
    let l: Vec<f64> = (0..3).map(|_| rng.uniform_range(-1.0, 0.0)).collect();
    let u: Vec<f64> = l.iter().map(|v| v + rng.uniform_range(0.2, 1.5)).collect();
    Qp::new(p, q, a, l, u).unwrap()
}

#[test]
fn admm_matches_active_set() {
    let mut rng = RngStream::new(5);
    let params = AdmmParams {
        eps: 1e-9,
        max_iter: 100_000,
        ..AdmmParams::default()
    };
    for trial in 0..100 {
        let qp = random_qp(&mut rng);
        let want =
            qp_active_set(&qp.p, &qp.q, &qp.a, &qp.l, &qp.u).expect("box around 0 is feasible");
        let got = qp_solve_admm(&qp, &params).unwrap().ok().unwrap();
        for (a, b) in got.x.iter().zip(&want) {
            assert!(
                (a - b).abs() < 1e-4,
                "trial {trial}: {:?} vs {want:?}",
                got.x
            );
        }
    }
}

fn rand_state(rng: &mut RngStream) -> VehicleState {
    VehicleState::new(
        rng.uniform_range(-10.0, 10.0),
        rng.uniform_range(-10.0, 10.0),
        rng.uniform_range(-2.5, 2.5),
        rng.uniform_range(-3.0, 3.0),
    )
}

#[test]
fn unicycle_jacobians_match_finite_differences() {
    let mut rng = RngStream::new(6);
    let dt = 0.1;
    for _ in 0..100 {
        let s = rand_state(&mut rng);
        let (v, w) = (rng.uniform_range(-2.0, 2.0), rng.uniform_range(-1.0, 1.0));
        let f = |x: &[f64]| {
            motion_unicycle(&VehicleState::from_slice(x), v, w, dt)
                .unwrap()
                .to_vec()
                .to_vec()
        };
        let fd = fd_jacobian(f, &s.to_vec(), 1e-6);
        assert!(jacobian_rel_error(&motion_jacobian(&s, v, dt).unwrap(), &fd) < 1e-5);
        let g = |u: &[f64]| {
            motion_unicycle(&s, u[0], u[1], dt)
                .unwrap()
                .to_vec()
                .to_vec()
        };
        let fd = fd_jacobian(g, &[v, w], 1e-6);
        assert!(jacobian_rel_error(&motion_input_jacobian(&s, dt), &fd) < 1e-5);
    }
}

#[test]
fn bicycle_jacobians_match_finite_differences() {
    let mut rng = RngStream::new(7);
    let (dt, l) = (0.1, 2.5);
    for _ in 0..100 {
        let s = rand_state(&mut rng);
        let (a, d) = (rng.uniform_range(-1.0, 1.0), rng.uniform_range(-0.5, 0.5));
        let (ja, jb) = bicycle_jacobian(&s, d, l, dt).unwrap();
        let f = |x: &[f64]| {
            motion_bicycle(&VehicleState::from_slice(x), a, d, l, dt)
                .unwrap()
                .to_vec()
                .to_vec()
        };
        assert!(jacobian_rel_error(&ja, &fd_jacobian(f, &s.to_vec(), 1e-6)) < 1e-5);
        let g = |u: &[f64]| {
            motion_bicycle(&s, u[0], u[1], l, dt)
                .unwrap()
                .to_vec()
                .to_vec()
        };
        assert!(jacobian_rel_error(&jb, &fd_jacobian(g, &[a, d], 1e-6)) < 1e-5);
    }
}

#[test]
fn range_bearing_jacobians_match_finite_differences() {
    let mut rng = RngStream::new(8);
    for _ in 0..100 {
        let s = rand_state(&mut rng).pose;
        let lm = (
            rng.uniform_range(-20.0, 20.0),
            rng.uniform_range(-20.0, 20.0),
        );
        let (hp, hl) = range_bearing_jacobian(&s, lm).unwrap();
        let z0 = observe_range_bearing(&s, lm).unwrap();
        // bearing differences are taken relative to the nominal one so wrap-around cannot bite
        let obs = |p: &Pose2D, m: (f64, f64)| {
            let z = observe_range_bearing(p, m).unwrap();
            vec![z.range, wrap(z.bearing - z0.bearing)]
        };
        let fp = |x: &[f64]| obs(&Pose2D::new(x[0], x[1], x[2]), lm);
        assert!(jacobian_rel_error(&hp, &fd_jacobian(fp, &[s.x, s.y, s.yaw], 1e-6)) < 1e-5);
        let fl = |x: &[f64]| obs(&s, (x[0], x[1]));
        assert!(jacobian_rel_error(&hl, &fd_jacobian(fl, &[lm.0, lm.1], 1e-6)) < 1e-5);
    }
}

#[test]
fn mpc_linearization_matches_finite_differences() {
    let mut rng = RngStream::new(9);
    let (dt, l) = (0.1, 2.5);
    for _ in 0..100 {
        let z = [
            rng.uniform_range(-5.0, 5.0),
            rng.uniform_range(-5.0, 5.0),
            rng.uniform_range(-3.0, 3.0),
            rng.uniform_range(-3.0, 3.0),
        ];
        let d = rng.uniform_range(-0.5, 0.5);
        let (a, b, _) = linearize_bicycle(&z, d, l, dt).unwrap();
        let fa = |x: &[f64]| bicycle_xyvyaw(x, &[0.3, d], l, dt);
        assert!(jacobian_rel_error(&a, &fd_jacobian(fa, &z, 1e-6)) < 1e-5);
        let fb = |u: &[f64]| bicycle_xyvyaw(&z, u, l, dt);
        assert!(jacobian_rel_error(&b, &fd_jacobian(fb, &[0.3, d], 1e-6)) < 1e-5);
    }
}

#[test]
fn unconstrained_mpc_matches_riccati_recursion() {
    for (i, z0) in [
        [0.0, 0.03, 2.0, 0.01],
        [0.1, -0.02, 1.5, -0.005],
        [0.0, 0.0, 2.5, 0.0],
    ]
    .into_iter()
    .enumerate()
    {
        let err = mpc_vs_riccati(z0, i as u64);
        assert!(err < 1e-6, "case {i}: {err:e}");
    }
}

/// EKF on pose only, with range-bearing updates to known landmarks. Used as
/// a reference for the particle filter.
fn pose_ekf_step(
    mean: &mut [f64; 3],
    p: &mut Mat,
    u: (f64, f64),
    dt: f64,
    z: &[RangeBearing],
    lms: &[(f64, f64)],
    n: &PfNoise,
) {
    let yaw = mean[2];
    let f = Mat::from_rows(&[
        [1.0, 0.0, -u.0 * yaw.sin() * dt],
        [0.0, 1.0, u.0 * yaw.cos() * dt],
        [0.0, 0.0, 1.0],
    ]);
    let v = Mat::from_rows(&[[yaw.cos() * dt, 0.0], [yaw.sin() * dt, 0.0], [0.0, dt]]);
    let m = Mat::from_diag(&[n.v_std.powi(2), n.omega_std.powi(2)]);
    mean[0] += u.0 * yaw.cos() * dt;
    mean[1] += u.0 * yaw.sin() * dt;
    mean[2] = wrap(mean[2] + u.1 * dt);
    *p = &(&(&f * p) * &f.transpose()) + &(&(&v * &m) * &v.transpose());
    let r = Mat::from_diag(&[n.range_std.powi(2), n.bearing_std.powi(2)]);
    for obs in z {
        let pose = Pose2D::new(mean[0], mean[1], mean[2]);
        let lm = lms[obs.landmark_id.unwrap()];
        let pred = observe_range_bearing(&pose, lm).unwrap();
        let (h, _) = range_bearing_jacobian(&pose, lm).unwrap();
        let s = &(&(&h * p) * &h.transpose()) + &r;
        let k = &(&*p * &h.transpose()) * &inverse_spd(&s).unwrap();
        let innov = [obs.range - pred.range, wrap(obs.bearing - pred.bearing)];
        for i in 0..3 {
            mean[i] += k[(i, 0)] * innov[0] + k[(i, 1)] * innov[1];
        }
        mean[2] = wrap(mean[2]);
        *p = &(&Mat::identity(3) - &(&k * &h)) * p;
        p.symmetrize();
    }
}

#[test]
fn particle_filter_agrees_with_ekf() {
    let lms = [(10.0, 0.0), (10.0, 10.0), (0.0, 15.0), (-5.0, 20.0)];
    let noise = PfNoise::default();
    let dt = 0.1;
    let mut rng = RngStream::new(10);
    let mut truth = VehicleState::new(0.0, 0.0, 0.0, 1.0);
    let mut set = ParticleSet::uniform_at(truth.pose, 2000).unwrap();
    let mut mean = [0.0; 3];
    let mut p = Mat::zeros(3, 3);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        truth = motion_unicycle(&truth, 1.0, 0.1, dt).unwrap();
        let u = (
            rng.gaussian(1.0, noise.v_std).unwrap(),
            rng.gaussian(0.1, noise.omega_std).unwrap(),
        );
        let z: Vec<RangeBearing> = lms
            .iter()
            .enumerate()
            .map(|(id, lm)| {
                let e = observe_range_bearing(&truth.pose, *lm).unwrap();
                RangeBearing {
                    range: rng.gaussian(e.range, noise.range_std).unwrap(),
                    bearing: rng.gaussian(e.bearing, noise.bearing_std).unwrap(),
                    landmark_id: Some(id),
                }
            })
            .collect();
        set = pf_step(&set, u, dt, &lms, &z, &noise, &mut rng).unwrap();
        pose_ekf_step(&mut mean, &mut p, u, dt, &z, &lms, &noise);
        let e = set.estimate();
        worst = worst.max((e.x - mean[0]).hypot(e.y - mean[1]));
    }
    assert!(worst < 0.1, "PF and EKF diverge by {worst}");
}

#[test]
fn ekf_predict_matches_monte_carlo() {
    let dt = 0.1;
    let s0 = VehicleState::new(1.0, 2.0, 0.3, 1.0);
    let p_std: [f64; 3] = [0.1, 0.15, 0.05];
    let (v_std, w_std) = (0.2, 0.1);
    let u = (1.0, 0.2);
    let b = EkfBelief::new(
        s0,
        Mat::from_diag(&[p_std[0].powi(2), p_std[1].powi(2), p_std[2].powi(2), 0.0]),
    )
    .unwrap();
    let vm = motion_input_jacobian(&s0, dt);
    let q = &(&vm * &Mat::from_diag(&[v_std * v_std, w_std * w_std])) * &vm.transpose();
    let pred = ekf_predict(&b, u, &q, dt).unwrap();

    let mut rng = RngStream::new(11);
    let n = 40_000;
    let mut samples = Vec::with_capacity(n);
    for _ in 0..n {
        let s = VehicleState::new(
            rng.gaussian(s0.pose.x, p_std[0]).unwrap(),
            rng.gaussian(s0.pose.y, p_std[1]).unwrap(),
            rng.gaussian(s0.pose.yaw, p_std[2]).unwrap(),
            s0.v,
        );
        let (v, w) = (
            rng.gaussian(u.0, v_std).unwrap(),
            rng.gaussian(u.1, w_std).unwrap(),
        );
        let next = motion_unicycle(&s, v, w, dt).unwrap();
        samples.push([next.pose.x, next.pose.y, next.pose.yaw]);
    }
    let mean: Vec<f64> = (0..3)
        .map(|i| samples.iter().map(|s| s[i]).sum::<f64>() / n as f64)
        .collect();
    let want = pred.state().to_vec();
    for i in 0..3 {
        assert!(
            (mean[i] - want[i]).abs() < 3e-3,
            "mean {i}: {} vs {}",
            mean[i],
            want[i]
        );
    }
    for i in 0..3 {
        for j in 0..3 {
            let c: f64 = samples
                .iter()
                .map(|s| (s[i] - mean[i]) * (s[j] - mean[j]))
                .sum::<f64>()
                / (n - 1) as f64;
            let e = pred.cov()[(i, j)];
            let scale = (pred.cov()[(i, i)] * pred.cov()[(j, j)]).sqrt();
            assert!((c - e).abs() < 0.05 * scale, "cov ({i},{j}): {c} vs {e}");
        }
    }
}
