use std::collections::BTreeMap;

use super::{box_outline, dist, AtTrace, DemoOutput, DemoResult};
use crate::mapping::{grid_update_scan, kmeans_cluster, OccupancyGrid};
use crate::navcore::{motion_unicycle, RngStream, VehicleState};
use crate::sim::config::ScenarioConfig;
use crate::sim::svg::Series;
use crate::sim::trace::TraceTable;
use crate::NavError;

type Params = BTreeMap<&'static str, f64>;

pub(super) const GRID_PARAMS: &[(&str, f64)] = &[
    ("beams", 36.0),
    ("max_range", 8.0),
    ("range_std", 0.05),
    ("resolution", 0.25),
    ("v", 1.0),
    ("omega", 0.25),
];

pub(super) const KMEANS_PARAMS: &[(&str, f64)] = &[
    ("k", 3.0),
    ("points_per_cluster", 20.0),
    ("spread", 1.0),
    ("max_iters", 100.0),
];

type Segment = ((f64, f64), (f64, f64));

/// 20 m square room with one rectangular pillar.
fn room() -> Vec<Segment> {
    let mut segs = Vec::new();
    for outline in [
        box_outline(0.0, 0.0, 20.0, 20.0),
        box_outline(8.0, 12.0, 12.0, 14.0),
    ] {
        for w in outline.windows(2) {
            segs.push((w[0], w[1]));
        }
    }
    segs
}

/// Distance along the ray to the nearest segment, if any.
fn ray_hit(origin: (f64, f64), angle: f64, segs: &[Segment]) -> Option<f64> {
    let (dx, dy) = (angle.cos(), angle.sin());
    let mut best: Option<f64> = None;
    for &(a, b) in segs {
        let (ex, ey) = (b.0 - a.0, b.1 - a.1);
        let denom = dx * ey - dy * ex;
        if denom.abs() < 1e-12 {
            continue;
        }
        let (wx, wy) = (a.0 - origin.0, a.1 - origin.1);
        let t = (wx * ey - wy * ex) / denom;
        let s = (wx * dy - wy * dx) / denom;
        if t > 0.0 && (0.0..=1.0).contains(&s) && best.is_none_or(|b| t < b) {
            best = Some(t);
        }
    }
    best
}

/// Cells touched by any wall, sampled at a quarter cell.
fn true_occupancy(g: &OccupancyGrid, segs: &[Segment]) -> Vec<bool> {
    let mut occ = vec![false; g.cells.len()];
    for &(a, b) in segs {
        let n = (dist(a, b) / (0.25 * g.resolution)).ceil() as usize;
        for i in 0..=n {
            let t = i as f64 / n as f64;
            let c = g.world_to_cell(a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1));
            if g.contains(c) {
                occ[c.1 as usize * g.width + c.0 as usize] = true;
            }
        }
    }
    occ
}

pub(super) fn grid(cfg: &ScenarioConfig, p: &Params) -> DemoResult {
    let dt = cfg.dt;
    let beams = p["beams"];
    let max_range = p["max_range"];
    if !(beams >= 1.0 && max_range > 0.0) {
        return Err(NavError::invalid("need at least one beam and a positive max_range").into());
    }
    let res = p["resolution"];
    if !(res > 0.0) {
        return Err(NavError::invalid("resolution must be positive").into());
    }
    let n = (22.0 / res).ceil() as usize;
    let mut g = OccupancyGrid::new(n, n, res, (-1.0, -1.0))?;
    let segs = room();
    let occupied = true_occupancy(&g, &segs);
    let mut rng = RngStream::new(cfg.seed);
    let mut trace = TraceTable::new(&["x", "y", "yaw", "known_cells", "err_map"])?;
    let mut pose = VehicleState::new(10.0, 3.0, 0.0, p["v"]);

    for k in 0..=cfg.steps() {
        if k > 0 {
            pose = motion_unicycle(&pose, p["v"], p["omega"], dt).at(&trace)?;
        }
        let beams = beams as usize;
        let mut scan = Vec::with_capacity(beams);
        for i in 0..beams {
            let rel = -std::f64::consts::PI + std::f64::consts::TAU * i as f64 / beams as f64;
            let hit = ray_hit((pose.pose.x, pose.pose.y), pose.pose.yaw + rel, &segs);
            let range = match hit {
                Some(d) if d < max_range => rng
                    .gaussian(d, p["range_std"])
                    .at(&trace)?
                    .clamp(1e-3, max_range),
                _ => max_range,
            };
            scan.push((rel, range));
        }
        g = grid_update_scan(&g, &pose.pose, &scan, max_range).at(&trace)?;

        let (mut known, mut wrong) = (0usize, 0usize);
        for (l, &occ) in g.cells.iter().zip(&occupied) {
            if l.abs() > 0.5 {
                known += 1;
                if (*l > 0.0) != occ {
                    wrong += 1;
                }
            }
        }
        let err = if known > 0 {
            wrong as f64 / known as f64
        } else {
            0.0
        };
        trace.push(
            k as f64 * dt,
            &[pose.pose.x, pose.pose.y, pose.pose.yaw, known as f64, err],
        )?;
    }
    let path: Vec<(f64, f64)> = trace
        .column("x")
        .expect("x")
        .into_iter()
        .zip(trace.column("y").expect("y"))
        .collect();
    let series = vec![
        Series::new("robot", path),
        Series::new("walls", box_outline(0.0, 0.0, 20.0, 20.0)),
        Series::new("pillar", box_outline(8.0, 12.0, 12.0, 14.0)),
    ];
    Ok(DemoOutput {
        trace,
        series,
        grid: Some(g),
        landmarks: None,
    })
}

/// Moving clusters re-clustered every step.
pub(super) fn kmeans(cfg: &ScenarioConfig, p: &Params) -> DemoResult {
    let dt = cfg.dt;
    let centers0 = [(0.0, 0.0), (10.0, 0.0), (5.0, 8.0)];
    let vel = [(0.1, 0.05), (-0.05, 0.1), (0.05, -0.1)];
    let k = p["k"] as usize;
    let per = p["points_per_cluster"] as usize;
    if k == 0 || per == 0 {
        return Err(NavError::invalid("k and points_per_cluster must be positive").into());
    }
    let mut rng = RngStream::new(cfg.seed);
    let mut offsets = Vec::with_capacity(3 * per);
    for c in 0..3 {
        for _ in 0..per {
            offsets.push((
                c,
                rng.gaussian(0.0, p["spread"])?,
                rng.gaussian(0.0, p["spread"])?,
            ));
        }
    }
    let mut cols = vec![
        "sse".to_string(),
        "iterations".to_string(),
        "err_centroid".to_string(),
    ];
    for i in 0..k {
        cols.push(format!("c{i}_x"));
        cols.push(format!("c{i}_y"));
    }
    let mut trace = TraceTable::new(&cols)?;
    let mut truth_paths = vec![Vec::new(); 3];
    let mut last_centroids = Vec::new();
    for step in 0..=cfg.steps() {
        let t = step as f64 * dt;
        let centers: Vec<(f64, f64)> = (0..3)
            .map(|c| (centers0[c].0 + vel[c].0 * t, centers0[c].1 + vel[c].1 * t))
            .collect();
        for (c, path) in truth_paths.iter_mut().enumerate() {
            path.push(centers[c]);
        }
        let pts: Vec<(f64, f64)> = offsets
            .iter()
            .map(|&(c, ox, oy)| (centers[c].0 + ox, centers[c].1 + oy))
            .collect();
        let cl = kmeans_cluster(&pts, k, &mut rng, p["max_iters"] as usize).at(&trace)?;
        // mean distance from each true center to its closest centroid
        let err = centers
            .iter()
            .map(|c| {
                cl.centroids
                    .iter()
                    .map(|m| dist(*c, *m))
                    .fold(f64::INFINITY, f64::min)
            })
            .sum::<f64>()
            / 3.0;
        let mut row = vec![cl.sse, cl.iterations as f64, err];
        for m in &cl.centroids {
            row.extend([m.0, m.1]);
        }
        trace.push(t, &row)?;
        last_centroids = cl.centroids;
    }
    let mut series: Vec<Series> = truth_paths
        .into_iter()
        .enumerate()
        .map(|(i, p)| Series::new(&format!("cluster {i} center"), p))
        .collect();
    series.push(Series::new("final centroids", last_centroids));
    Ok(DemoOutput {
        trace,
        series,
        grid: None,
        landmarks: None,
    })
}
