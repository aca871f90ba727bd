use super::rrt_star::{EdgeModel, Plan, RrtStar, RrtStarParams};
use super::world::GridWorld;
use crate::error::{NavError, Result};
use crate::navcore::{solve_dare, Mat, RngStream};

pub const LQR_DT: f64 = 0.1;
pub const LQR_HORIZON: usize = 200;
const ARRIVAL_TOL: f64 = 0.05;

/// Discrete double integrator (x, y, vx, vy) with acceleration inputs,
/// forward Euler.
pub fn double_integrator(dt: f64) -> (Mat, Mat) {
    let a = Mat::from_rows(&[
        [1.0, 0.0, dt, 0.0],
        [0.0, 1.0, 0.0, dt],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]);
    let b = Mat::from_rows(&[[0.0, 0.0], [0.0, 0.0], [dt, 0.0], [0.0, dt]]);
    (a, b)
}

/// LQR regulator for the double integrator with Q = R = I.
#[derive(Debug, Clone)]
pub struct LqrSteer {
    pub dt: f64,
    pub a: Mat,
    pub b: Mat,
    pub p: Mat,
    pub k: Mat,
}

impl LqrSteer {
    pub fn new(dt: f64) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(NavError::invalid("dt must be positive"));
        }
        let (a, b) = double_integrator(dt);
        let (p, k) = solve_dare(&a, &b, &Mat::identity(4), &Mat::identity(2))?;
        Ok(LqrSteer { dt, a, b, p, k })
    }

    /// Closed loop u = -K (x - to) for at most `horizon` steps, stopping once
    /// every component is within 0.05 of `to`. Returns the visited states
    /// (excluding `from`) and the accumulated quadratic cost.
    pub fn steer(&self, from: &[f64], to: &[f64], horizon: usize) -> (Vec<[f64; 4]>, f64) {
        let mut x = [from[0], from[1], from[2], from[3]];
        let mut traj = Vec::new();
        let mut cost = 0.0;
        if from == to {
            return (traj, cost);
        }
        for _ in 0..horizon {
            let e: Vec<f64> = (0..4).map(|i| x[i] - to[i]).collect();
            let ke = self.k.mat_vec(&e);
            let u = [-ke[0], -ke[1]];
            cost += e.iter().map(|v| v * v).sum::<f64>() + u[0] * u[0] + u[1] * u[1];
            let ax = self.a.mat_vec(&x);
            let bu = self.b.mat_vec(&u);
            x = [ax[0] + bu[0], ax[1] + bu[1], ax[2] + bu[2], ax[3] + bu[3]];
            traj.push(x);
            if (0..4).all(|i| (x[i] - to[i]).abs() < ARRIVAL_TOL) {
                break;
            }
        }
        (traj, cost)
    }

    /// sqrt((b - a)' P (b - a)).
    pub fn metric(&self, a: &[f64], b: &[f64]) -> f64 {
        let d: Vec<f64> = (0..4).map(|i| b[i] - a[i]).collect();
        let pd = self.p.mat_vec(&d);
        d.iter()
            .zip(&pd)
            .map(|(x, y)| x * y)
            .sum::<f64>()
            .max(0.0)
            .sqrt()
    }
}

/// See [`LqrSteer::steer`]; solves the Riccati equation on every call.
pub fn lqr_steer(
    from: &[f64],
    to: &[f64],
    horizon: usize,
    dt: f64,
) -> Result<(Vec<[f64; 4]>, f64)> {
    if from.len() != 4 || to.len() != 4 {
        return Err(NavError::invalid(
            "double-integrator states have 4 components",
        ));
    }
    Ok(LqrSteer::new(dt)?.steer(from, to, horizon))
}

/// Tree nodes are rest states (x, y, 0, 0); edges are LQR trajectories.
pub struct LqrModel {
    pub steer: LqrSteer,
    pub horizon: usize,
}

impl EdgeModel for LqrModel {
    fn state_at(&self, pos: (f64, f64)) -> Vec<f64> {
        vec![pos.0, pos.1, 0.0, 0.0]
    }

    fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        self.steer.metric(a, b)
    }

    fn near_scale(&self) -> f64 {
        self.steer.p[(0, 0)].sqrt()
    }

    fn connect(&self, world: &GridWorld, a: &[f64], b: &[f64]) -> Result<Option<f64>> {
        let (traj, cost) = self.steer.steer(a, b, self.horizon);
        let Some(last) = traj.last() else {
            return Ok(Some(0.0));
        };
        if (0..4).any(|i| (last[i] - b[i]).abs() >= ARRIVAL_TOL) {
            return Ok(None);
        }
        let mut prev = (a[0], a[1]);
        for p in traj
            .iter()
            .map(|s| (s[0], s[1]))
            .chain(std::iter::once((b[0], b[1])))
        {
            if !world.segment_free(prev, p) {
                return Ok(None);
            }
            prev = p;
        }
        Ok(Some(cost))
    }
}

pub fn lqr_rrt_star_planner<'w>(
    world: &'w GridWorld,
    start: (f64, f64),
    goal: (f64, f64),
    params: &RrtStarParams,
    rng: RngStream,
) -> Result<RrtStar<'w, LqrModel>> {
    let model = LqrModel {
        steer: LqrSteer::new(LQR_DT)?,
        horizon: LQR_HORIZON,
    };
    RrtStar::new(world, model, start, goal, *params, rng)
}

/// RRT* whose distance is the LQR cost-to-go and whose edges are LQR
/// trajectories of the double integrator.
pub fn lqr_rrt_star_plan(
    world: &GridWorld,
    start: (f64, f64),
    goal: (f64, f64),
    params: &RrtStarParams,
    rng: RngStream,
) -> Result<Plan> {
    lqr_rrt_star_planner(world, start, goal, params, rng)?.run()
}
