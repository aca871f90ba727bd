//! Log-odds occupancy mapping of a square room from a fixed pose.
//! Writes `occupancy_grid.pgm` to the current directory.

use std::f64::consts::{PI, TAU};

use navsim::mapping::grid_update_scan;
use navsim::mapping::OccupancyGrid;
use navsim::navcore::Pose2D;

fn main() -> navsim::Result<()> {
    let mut g = OccupancyGrid::new(50, 50, 0.2, (-5.0, -5.0))?;
    let pose = Pose2D::new(0.5, -0.5, 0.3);
    // walls of the square |x| = 4, |y| = 4
    let range_to_wall = |a: f64| {
        let (c, s) = (a.cos(), a.sin());
        let tx = if c > 0.0 {
            (4.0 - pose.x) / c
        } else if c < 0.0 {
            (-4.0 - pose.x) / c
        } else {
            f64::INFINITY
        };
        let ty = if s > 0.0 {
            (4.0 - pose.y) / s
        } else if s < 0.0 {
            (-4.0 - pose.y) / s
        } else {
            f64::INFINITY
        };
        tx.min(ty)
    };
    let scan: Vec<(f64, f64)> = (0..180)
        .map(|i| {
            let rel = -PI + TAU * i as f64 / 180.0;
            (rel, range_to_wall(pose.yaw + rel).min(10.0))
        })
        .collect();
    for _ in 0..3 {
        g = grid_update_scan(&g, &pose, &scan, 10.0)?;
    }
    let occupied = g.cells.iter().filter(|l| **l > 0.0).count();
    let free = g.cells.iter().filter(|l| **l < 0.0).count();
    println!(
        "occupied cells: {occupied}, free cells: {free}, unknown: {}",
        g.cells.len() - occupied - free
    );
    g.write_pgm(std::path::Path::new("occupancy_grid.pgm"))?;
    println!("wrote occupancy_grid.pgm");
    Ok(())
}
