use std::collections::BTreeMap;

use super::{box_outline, dist, DemoOutput, DemoResult};
use crate::navcore::RngStream;
use crate::planning::{lqr_rrt_star_plan, plan_grid, plan_potential_field, rrt_star_plan};
use crate::planning::{GridWorld, PotentialParams, RrtStarParams};
use crate::sim::config::ScenarioConfig;
use crate::sim::svg::Series;
use crate::sim::trace::TraceTable;
use crate::NavError;

type Params = BTreeMap<&'static str, f64>;

pub(super) const DIJKSTRA_PARAMS: &[(&str, f64)] = &[("density", 0.05)];

pub(super) const ASTAR_PARAMS: &[(&str, f64)] = &[("density", 0.05), ("heuristic_weight", 1.0)];

pub(super) const POTENTIAL_PARAMS: &[(&str, f64)] = &[
    ("k_att", 5.0),
    ("k_rep", 100.0),
    ("rho0", 5.0),
    ("resolution", 0.5),
];

pub(super) const RRT_PARAMS: &[(&str, f64)] = &[
    ("step", 1.0),
    ("goal_sample_rate", 0.1),
    ("max_iter", 2000.0),
    ("gamma", 30.0),
];

pub(super) const LQR_RRT_PARAMS: &[(&str, f64)] = &[
    ("step", 1.0),
    ("goal_sample_rate", 0.1),
    ("max_iter", 1000.0),
    ("gamma", 30.0),
];

const GRID_START: (usize, usize) = (10, 10);
const GRID_GOAL: (usize, usize) = (50, 50);

/// 60x60 cells: border, two staggered walls, seeded scatter.
fn grid_world(seed: u64, density: f64) -> crate::Result<GridWorld> {
    if !(0.0..1.0).contains(&density) {
        return Err(NavError::invalid("density must be in [0, 1)"));
    }
    let n = 60;
    let mut rng = RngStream::new(seed);
    let mut w = GridWorld::random(n, n, 1.0, density, &mut rng)?;
    for i in 0..n {
        for c in [(0, i), (n - 1, i), (i, 0), (i, n - 1)] {
            w.set_blocked(c, true);
        }
    }
    for r in 0..40 {
        w.set_blocked((r, 20), true);
    }
    for r in 20..60 {
        w.set_blocked((r, 40), true);
    }
    w.set_blocked(GRID_START, false);
    w.set_blocked(GRID_GOAL, false);
    Ok(w)
}

/// 15 m square at 0.5 m with two offset bars.
fn rrt_world() -> crate::Result<GridWorld> {
    let mut w = GridWorld::new(30, 30, 0.5)?;
    w.block_rect(4.0, 0.0, 6.0, 10.0);
    w.block_rect(9.0, 5.0, 11.0, 15.0);
    Ok(w)
}

const RRT_START: (f64, f64) = (1.0, 1.0);
const RRT_GOAL: (f64, f64) = (13.0, 13.0);

/// One row per waypoint with the running path length.
fn path_trace(path: &[(f64, f64)], goal: (f64, f64), dt: f64) -> crate::Result<TraceTable> {
    let mut trace = TraceTable::new(&["x", "y", "cost_so_far", "err_dist_to_goal"])?;
    let mut cost = 0.0;
    for (i, p) in path.iter().enumerate() {
        if i > 0 {
            cost += dist(path[i - 1], *p);
        }
        trace.push(i as f64 * dt, &[p.0, p.1, cost, dist(*p, goal)])?;
    }
    Ok(trace)
}

pub(super) fn grid(cfg: &ScenarioConfig, p: &Params, weight: f64) -> DemoResult {
    let w = grid_world(cfg.seed, p["density"])?;
    let path = plan_grid(&w, GRID_START, GRID_GOAL, weight)?;
    let pts: Vec<(f64, f64)> = path.cells.iter().map(|&c| w.cell_center(c)).collect();
    let trace = path_trace(&pts, w.cell_center(GRID_GOAL), cfg.dt)?;
    let series = vec![
        Series::new("path", pts),
        Series::new("border", box_outline(0.0, 0.0, 60.0, 60.0)),
        Series::new("wall 1", box_outline(20.0, 0.0, 21.0, 40.0)),
        Series::new("wall 2", box_outline(40.0, 20.0, 41.0, 60.0)),
    ];
    Ok(DemoOutput {
        trace,
        series,
        grid: None,
        landmarks: None,
    })
}

pub(super) fn potential(cfg: &ScenarioConfig, p: &Params) -> DemoResult {
    let obstacles = [(15.0, 25.0), (5.0, 15.0), (20.0, 26.0), (25.0, 25.0)];
    let (start, goal) = ((0.0, 0.0), (30.0, 30.0));
    let params = PotentialParams {
        k_att: p["k_att"],
        k_rep: p["k_rep"],
        rho0: p["rho0"],
        resolution: p["resolution"],
    };
    let path = plan_potential_field(&obstacles, start, goal, &params)?;
    let trace = path_trace(&path, goal, cfg.dt)?;
    let mut series = vec![Series::new("path", path)];
    for (i, o) in obstacles.iter().enumerate() {
        series.push(Series::new(
            &format!("obstacle {i}"),
            box_outline(o.0 - 0.3, o.1 - 0.3, o.0 + 0.3, o.1 + 0.3),
        ));
    }
    Ok(DemoOutput {
        trace,
        series,
        grid: None,
        landmarks: None,
    })
}

fn rrt_params(p: &Params) -> crate::Result<RrtStarParams> {
    if !(p["max_iter"] >= 0.0) {
        return Err(NavError::invalid("max_iter must be non-negative"));
    }
    Ok(RrtStarParams {
        step: p["step"],
        goal_sample_rate: p["goal_sample_rate"],
        max_iter: p["max_iter"] as usize,
        gamma: p["gamma"],
    })
}

fn rrt_series(path: Vec<(f64, f64)>) -> Vec<Series> {
    vec![
        Series::new("path", path),
        Series::new("bounds", box_outline(0.0, 0.0, 15.0, 15.0)),
        Series::new("bar 1", box_outline(4.0, 0.0, 6.0, 10.0)),
        Series::new("bar 2", box_outline(9.0, 5.0, 11.0, 15.0)),
    ]
}

pub(super) fn rrt(cfg: &ScenarioConfig, p: &Params) -> DemoResult {
    let w = rrt_world()?;
    let (_, path) = rrt_star_plan(
        &w,
        RRT_START,
        RRT_GOAL,
        &rrt_params(p)?,
        RngStream::new(cfg.seed),
    )?;
    let trace = path_trace(&path, RRT_GOAL, cfg.dt)?;
    Ok(DemoOutput {
        trace,
        series: rrt_series(path),
        grid: None,
        landmarks: None,
    })
}

pub(super) fn lqr_rrt(cfg: &ScenarioConfig, p: &Params) -> DemoResult {
    let w = rrt_world()?;
    let (_, path) = lqr_rrt_star_plan(
        &w,
        RRT_START,
        RRT_GOAL,
        &rrt_params(p)?,
        RngStream::new(cfg.seed),
    )?;
    let trace = path_trace(&path, RRT_GOAL, cfg.dt)?;
    Ok(DemoOutput {
        trace,
        series: rrt_series(path),
        grid: None,
        landmarks: None,
    })
}
