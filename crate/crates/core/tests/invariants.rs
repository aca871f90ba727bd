use navsim::localization::{
    ekf_predict, ekf_update, hf_predict, hf_update, pf_step, EkfBelief, HistogramBelief,
    ParticleSet, PfNoise,
};
use navsim::mapping::{grid_update_scan, kmeans_cluster, logistic, OccupancyGrid};
use navsim::navcore::*;
use navsim::planning::{
    lqr_rrt_star_planner, plan_grid, Euclidean, GridWorld, RrtStar, RrtStarParams,
};
use navsim::slam::{ekf_slam_step, fastslam2_step, fastslam_init, EkfSlamState, FastSlamNoise};
use navsim::tracking::{mpc_track_step, pid_step, MpcParams, PidState};
use proptest::prelude::*;

fn assert_psd(p: &Mat) {
    assert!(p.is_finite());
    assert!(p.asymmetry() < 1e-9, "asymmetry {}", p.asymmetry());
    let scale = p.max_abs().max(1.0);
    assert!(
        p.min_symmetric_eigenvalue() > -1e-9 * scale,
        "min eigenvalue {}",
        p.min_symmetric_eigenvalue()
    );
}

fn landmark_ring() -> Vec<(f64, f64)> {
    (0..6)
        .map(|i| {
            let a = i as f64 * std::f64::consts::TAU / 6.0;
            (10.0 * a.cos(), 10.0 * a.sin())
        })
        .collect()
}

fn observe_all(p: &Pose2D, lms: &[(f64, f64)], rng: &mut RngStream) -> Vec<RangeBearing> {
    lms.iter()
        .enumerate()
        .map(|(i, &lm)| {
            let z = observe_range_bearing(p, lm).unwrap();
            RangeBearing::new(
                (z.range + rng.gaussian(0.0, 0.2).unwrap()).max(1e-3),
                wrap(z.bearing + rng.gaussian(0.0, 0.03).unwrap()),
                Some(i),
            )
            .unwrap()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn wrap_lands_in_half_open_interval(t in -1e4f64..1e4) {
        let w = wrap(t);
        prop_assert!(w > -std::f64::consts::PI && w <= std::f64::consts::PI);
        prop_assert!(((t - w) / std::f64::consts::TAU).fract().abs() < 1e-6
            || (1.0 - ((t - w) / std::f64::consts::TAU).fract().abs()) < 1e-6);
    }

    #[test]
    fn ekf_covariance_stays_symmetric_psd(seed in any::<u64>(), n in 1usize..60) {
        let mut rng = RngStream::new(seed);
        let mut b = EkfBelief::new(
            VehicleState::new(0.0, 0.0, 0.0, 1.0),
            Mat::from_diag(&[0.1, 0.1, 0.05, 0.1]),
        ).unwrap();
        let q = Mat::from_diag(&[0.01, 0.01, 0.005, 0.02]);
        let r = Mat::from_diag(&[0.5, 0.5]);
        for _ in 0..n {
            let u = (rng.uniform_range(0.0, 2.0), rng.uniform_range(-0.5, 0.5));
            b = ekf_predict(&b, u, &q, 0.1).unwrap();
            assert_psd(b.cov());
            if rng.uniform() < 0.5 {
                let z = (rng.uniform_range(-5.0, 5.0), rng.uniform_range(-5.0, 5.0));
                b = ekf_update(&b, z, &r).unwrap();
                assert_psd(b.cov());
            }
        }
    }

    #[test]
    fn ekf_slam_covariance_stays_symmetric_psd(seed in any::<u64>(), n in 1usize..40) {
        let mut rng = RngStream::new(seed);
        let lms = landmark_ring();
        let mut truth = Pose2D::new(0.0, 0.0, 0.0);
        let mut s = EkfSlamState::new(truth, Mat::zeros(3, 3)).unwrap();
        let q = Mat::from_diag(&[0.01, 0.01, 0.003]);
        let r = Mat::from_diag(&[0.04, 0.0009]);
        for _ in 0..n {
            truth = move_pose(&truth, 1.0, 0.1, 0.1);
            let k = rng.below(lms.len() + 1);
            let z: Vec<_> = observe_all(&truth, &lms, &mut rng).into_iter().take(k).collect();
            s = ekf_slam_step(&s, (1.0, 0.1), 0.1, &z, &q, &r).unwrap();
            assert_psd(&s.belief.cov);
            prop_assert_eq!(s.belief.mean.len(), 3 + 2 * s.landmark_count());
        }
    }

    #[test]
    fn particle_weights_stay_normalized(seed in any::<u64>(), n in 1usize..30) {
        let mut rng = RngStream::new(seed);
        let lms = landmark_ring();
        let mut truth = Pose2D::new(0.0, 0.0, 0.0);
        let mut p = ParticleSet::uniform_at(truth, 50).unwrap();
        for _ in 0..n {
            truth = move_pose(&truth, 1.0, 0.1, 0.1);
            let z = observe_all(&truth, &lms, &mut rng);
            p = pf_step(&p, (1.0, 0.1), 0.1, &lms, &z, &PfNoise::default(), &mut rng).unwrap();
            prop_assert_eq!(p.len(), 50);
            prop_assert!((p.total_weight() - 1.0).abs() < 1e-9);
            prop_assert!(p.particles.iter().all(|q| q.weight >= 0.0 && q.pose.yaw.abs() <= std::f64::consts::PI));
        }
    }

    #[test]
    fn fastslam_weights_stay_normalized(seed in any::<u64>(), n in 1usize..20) {
        let mut rng = RngStream::new(seed);
        let lms = landmark_ring();
        let mut truth = Pose2D::new(0.0, 0.0, 0.0);
        let mut ps = fastslam_init(truth, 10).unwrap();
        for _ in 0..n {
            truth = move_pose(&truth, 1.0, 0.1, 0.1);
            let z = observe_all(&truth, &lms, &mut rng);
            ps = fastslam2_step(&ps, (1.0, 0.1), 0.1, &z, &FastSlamNoise::default(), &mut rng).unwrap();
            let total: f64 = ps.iter().map(|p| p.weight).sum();
            prop_assert!((total - 1.0).abs() < 1e-9);
            for p in &ps {
                for lm in p.landmarks.values() {
                    assert_psd(&lm.cov);
                }
            }
        }
    }

    #[test]
    fn histogram_mass_stays_normalized(
        seed in any::<u64>(),
        shift in (-2i64..=2, -2i64..=2),
        motion_std in 0.0f64..2.0,
    ) {
        let mut rng = RngStream::new(seed);
        let h = HistogramBelief::uniform(12, 10, 1.0, (0.0, 0.0)).unwrap();
        let h = hf_predict(&h, shift, motion_std).unwrap();
        prop_assert!((h.total_mass() - 1.0).abs() < 1e-9);
        let z: Vec<_> = (0..3)
            .map(|_| {
                let lm = (rng.uniform_range(0.0, 12.0), rng.uniform_range(0.0, 10.0));
                (lm, rng.uniform_range(0.5, 6.0))
            })
            .collect();
        let h = hf_update(&h, &z, 1.0).unwrap();
        prop_assert!((h.total_mass() - 1.0).abs() < 1e-9);
        prop_assert!(h.mass.iter().all(|&m| m >= 0.0 && m.is_finite()));
    }

    #[test]
    fn occupancy_probabilities_stay_in_unit_interval(seed in any::<u64>(), scans in 1usize..8) {
        let mut rng = RngStream::new(seed);
        let mut g = OccupancyGrid::new(40, 40, 0.5, (-10.0, -10.0)).unwrap();
        for _ in 0..scans {
            let pose = Pose2D::new(rng.uniform_range(-3.0, 3.0), rng.uniform_range(-3.0, 3.0), rng.uniform_range(-3.0, 3.0));
            let scan: Vec<_> = (0..36)
                .map(|i| (i as f64 * 0.17, rng.uniform_range(0.5, 8.0).min(6.0)))
                .collect();
            g = grid_update_scan(&g, &pose, &scan, 6.0).unwrap();
        }
        for &l in &g.cells {
            prop_assert!(l.abs() <= 5.0 + 1e-12);
            let p = logistic(l);
            prop_assert!((0.0..=1.0).contains(&p));
        }
    }

    #[test]
    fn kmeans_sse_never_increases(seed in any::<u64>(), k in 1usize..5) {
        let mut rng = RngStream::new(seed);
        let pts: Vec<_> = (0..40)
            .map(|_| (rng.uniform_range(-10.0, 10.0), rng.uniform_range(-10.0, 10.0)))
            .collect();
        let c = kmeans_cluster(&pts, k, &mut rng, 100).unwrap();
        for w in c.sse_history.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-9);
        }
        prop_assert!(c.assignment.iter().all(|&a| a < k));
    }

    #[test]
    fn pid_output_within_bounds(
        gains in (0.0f64..20.0, 0.0f64..20.0, 0.0f64..5.0),
        lim in (0.1f64..5.0, 0.1f64..5.0),
        errors in prop::collection::vec(-100.0f64..100.0, 1..50),
    ) {
        let mut s = PidState::new(gains.0, gains.1, gains.2, -lim.0, lim.1).unwrap();
        for e in errors {
            let (u, next) = pid_step(&s, e, 0.1).unwrap();
            prop_assert!(u >= -lim.0 && u <= lim.1);
            s = next;
        }
    }

    #[test]
    fn mpc_output_within_bounds(
        z in (-1.0f64..1.0, -1.0f64..1.0, 0.0f64..4.0, -0.5f64..0.5),
        ref_yaw in -0.3f64..0.3,
        ref_v in 0.5f64..4.0,
    ) {
        let p = MpcParams::default();
        let dt = 0.1;
        let reference: Vec<[f64; 4]> = (0..=p.horizon)
            .map(|t| {
                let s = ref_v * dt * t as f64;
                [s * ref_yaw.cos(), s * ref_yaw.sin(), ref_v, ref_yaw]
            })
            .collect();
        let state = [z.0, z.1, z.2, z.3];
        let out = mpc_track_step(&state, &reference, &p, 2.5, dt, None).unwrap();
        let tol = 1e-9;
        prop_assert_eq!(out.inputs.len(), p.horizon);
        prop_assert_eq!(out.predicted.len(), p.horizon + 1);
        for &(a, d) in &out.inputs {
            prop_assert!(a.abs() <= p.a_max + tol);
            prop_assert!(d.abs() <= p.steer_max + tol);
        }
        for w in out.inputs.windows(2) {
            prop_assert!((w[1].1 - w[0].1).abs() <= p.dsteer_max * dt + 1e-6);
        }
        prop_assert_eq!((out.accel, out.steer), out.inputs[0]);
    }

    #[test]
    fn grid_path_is_connected_and_free(seed in any::<u64>(), weight in 0.0f64..3.0) {
        let mut rng = RngStream::new(seed);
        let mut w = GridWorld::random(20, 20, 1.0, 0.3, &mut rng).unwrap();
        w.set_blocked((0, 0), false);
        w.set_blocked((19, 19), false);
        if let Ok(path) = plan_grid(&w, (0, 0), (19, 19), weight) {
            prop_assert_eq!(path.cells.first(), Some(&(0, 0)));
            prop_assert_eq!(path.cells.last(), Some(&(19, 19)));
            prop_assert!(path.cells.iter().all(|&c| !w.is_blocked(c)));
            for s in path.cells.windows(2) {
                let dr = s[0].0.abs_diff(s[1].0);
                let dc = s[0].1.abs_diff(s[1].1);
                prop_assert!(dr <= 1 && dc <= 1 && dr + dc > 0);
            }
            prop_assert!((path.cost - path.recompute_cost()).abs() < 1e-9);
        }
    }
}

fn box_world(rng: &mut RngStream) -> GridWorld {
    let mut w = GridWorld::new(30, 30, 0.5).unwrap();
    for _ in 0..3 {
        let (x, y) = (rng.uniform_range(3.0, 11.0), rng.uniform_range(3.0, 11.0));
        w.block_rect(
            x,
            y,
            x + rng.uniform_range(0.5, 2.0),
            y + rng.uniform_range(0.5, 2.0),
        );
    }
    w
}

fn check_planner<M: navsim::planning::EdgeModel>(
    mut p: RrtStar<'_, M>,
    w: &GridWorld,
    iters: usize,
) -> Result<(), TestCaseError> {
    let mut best = f64::INFINITY;
    for _ in 0..iters {
        p.step().unwrap();
        p.tree().check_costs(1e-9).unwrap();
        if let Some(c) = p.best_cost() {
            prop_assert!(c <= best + 1e-12, "best cost rose from {best} to {c}");
            best = c;
        }
    }
    if let Ok((_, path)) = p.finish() {
        for s in path.windows(2) {
            prop_assert!(
                w.segment_free(s[0], s[1]),
                "segment {:?} hits an obstacle",
                s
            );
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn rrt_star_tree_and_path_invariants(seed in any::<u64>()) {
        let mut rng = RngStream::new(seed);
        let w = box_world(&mut rng);
        let params = RrtStarParams { step: 1.0, goal_sample_rate: 0.1, max_iter: 300, gamma: 20.0 };
        let p = RrtStar::new(&w, Euclidean, (1.0, 1.0), (14.0, 14.0), params, rng).unwrap();
        check_planner(p, &w, 300)?;
    }

    #[test]
    fn lqr_rrt_star_tree_and_path_invariants(seed in any::<u64>()) {
        let mut rng = RngStream::new(seed);
        let w = box_world(&mut rng);
        let params = RrtStarParams { step: 1.0, goal_sample_rate: 0.1, max_iter: 150, gamma: 20.0 };
        let p = lqr_rrt_star_planner(&w, (1.0, 1.0), (14.0, 14.0), &params, rng).unwrap();
        check_planner(p, &w, 150)?;
    }
}
