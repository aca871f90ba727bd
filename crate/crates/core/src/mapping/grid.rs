use std::fmt::Write as _;
use std::path::Path;

use crate::error::{NavError, Result};
use crate::navcore::Pose2D;

/// Cell index (ix along x, iy along y). Signed so rays can be traced before
/// bounds are checked.
pub type Cell = (i64, i64);

pub const P_OCC: f64 = 0.7;
pub const P_FREE: f64 = 0.3;
pub const LOG_ODDS_CLAMP: f64 = 5.0;

pub fn l_occ() -> f64 {
    (P_OCC / (1.0 - P_OCC)).ln()
}

pub fn l_free() -> f64 {
    (P_FREE / (1.0 - P_FREE)).ln()
}

/// Symmetric Bresenham line between two cells, both endpoints included.
///
/// Steps along the major axis; the minor coordinate is rounded half-up in
/// absolute terms, so tracing b -> a visits the same cells as a -> b.
pub fn bresenham_ray(from: Cell, to: Cell) -> Vec<Cell> {
    let (dx, dy) = (to.0 - from.0, to.1 - from.1);
    let n = dx.abs().max(dy.abs());
    if n == 0 {
        return vec![from];
    }
    let x_major = dx.abs() >= dy.abs();
    let (major0, minor0, dmajor, dminor) = if x_major {
        (from.0, from.1, dx, dy)
    } else {
        (from.1, from.0, dy, dx)
    };
    let step = dmajor.signum();
    (0..=n)
        .map(|k| {
            let major = major0 + step * k;
            // minor0 + round_half_up(k * dminor / n)
            let minor = minor0 + (2 * k * dminor + n).div_euclid(2 * n);
            if x_major {
                (major, minor)
            } else {
                (minor, major)
            }
        })
        .collect()
}

/// Log-odds occupancy grid. `origin` is the world position of the lower-left
/// corner of cell (0, 0).
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyGrid {
    pub width: usize,
    pub height: usize,
    pub resolution: f64,
    pub origin: (f64, f64),
    /// index = iy * width + ix
    pub cells: Vec<f64>,
}

impl OccupancyGrid {
    pub fn new(width: usize, height: usize, resolution: f64, origin: (f64, f64)) -> Result<Self> {
        if width == 0 || height == 0 || !(resolution > 0.0) {
            return Err(NavError::invalid("grid needs positive size and resolution"));
        }
        Ok(OccupancyGrid {
            width,
            height,
            resolution,
            origin,
            cells: vec![0.0; width * height],
        })
    }

    pub fn contains(&self, c: Cell) -> bool {
        c.0 >= 0 && c.1 >= 0 && (c.0 as usize) < self.width && (c.1 as usize) < self.height
    }

    fn index(&self, c: Cell) -> usize {
        c.1 as usize * self.width + c.0 as usize
    }

    pub fn log_odds(&self, c: Cell) -> Result<f64> {
        if !self.contains(c) {
            return Err(NavError::OutOfBounds(c.0, c.1));
        }
        Ok(self.cells[self.index(c)])
    }

    pub fn probability(&self, c: Cell) -> Result<f64> {
        Ok(logistic(self.log_odds(c)?))
    }

    /// floor((w - origin) / resolution) on each axis.
    pub fn world_to_cell(&self, x: f64, y: f64) -> Cell {
        (
            ((x - self.origin.0) / self.resolution).floor() as i64,
            ((y - self.origin.1) / self.resolution).floor() as i64,
        )
    }

    pub fn cell_center(&self, c: Cell) -> (f64, f64) {
        (
            self.origin.0 + (c.0 as f64 + 0.5) * self.resolution,
            self.origin.1 + (c.1 as f64 + 0.5) * self.resolution,
        )
    }

    /// Bounds-checked [`bresenham_ray`].
    pub fn ray(&self, from: Cell, to: Cell) -> Result<Vec<Cell>> {
        for c in [from, to] {
            if !self.contains(c) {
                return Err(NavError::OutOfBounds(c.0, c.1));
            }
        }
        Ok(bresenham_ray(from, to))
    }

    /// Writes the grid as plain-text PGM (P2). Top image row is the highest y.
    pub fn to_pgm(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "P2");
        let _ = writeln!(
            s,
            "# resolution {} origin {} {}",
            self.resolution, self.origin.0, self.origin.1
        );
        let _ = writeln!(s, "{} {}", self.width, self.height);
        let _ = writeln!(s, "255");
        for iy in (0..self.height).rev() {
            let row: Vec<String> = (0..self.width)
                .map(|ix| {
                    let p = logistic(self.cells[iy * self.width + ix]);
                    format!("{}", (255.0 * p).round() as u32)
                })
                .collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        s
    }

    pub fn write_pgm(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_pgm())?;
        Ok(())
    }
}

pub fn logistic(l: f64) -> f64 {
    1.0 / (1.0 + (-l).exp())
}

/// Integrates one range scan. Every beam lowers the log-odds of the cells it
/// passes through and raises its endpoint cell unless the beam hit
/// `max_range`. Results are clamped to +-5.
///
/// `scan` holds (angle relative to sensor yaw, range) pairs.
pub fn grid_update_scan(
    g: &OccupancyGrid,
    sensor_pose: &Pose2D,
    scan: &[(f64, f64)],
    max_range: f64,
) -> Result<OccupancyGrid> {
    let origin_cell = g.world_to_cell(sensor_pose.x, sensor_pose.y);
    if !g.contains(origin_cell) {
        return Err(NavError::OutOfBounds(origin_cell.0, origin_cell.1));
    }
    let (lf, lo) = (l_free(), l_occ());
    let mut delta = vec![0.0; g.cells.len()];
    for &(angle, range) in scan {
        if !(range > 0.0 && range <= max_range) {
            return Err(NavError::invalid(format!(
                "range {range} outside (0, {max_range}]"
            )));
        }
        let a = sensor_pose.yaw + angle;
        let end = g.world_to_cell(
            sensor_pose.x + range * a.cos(),
            sensor_pose.y + range * a.sin(),
        );
        let ray = bresenham_ray(origin_cell, end);
        let (last, before) = ray.split_last().expect("ray has at least one cell");
        for &c in before {
            if g.contains(c) {
                delta[g.index(c)] += lf;
            }
        }
        if range < max_range && g.contains(*last) {
            delta[g.index(*last)] += lo;
        }
    }
    let mut out = g.clone();
    for (cell, d) in out.cells.iter_mut().zip(&delta) {
        if *d != 0.0 {
            *cell = (*cell + d).clamp(-LOG_ODDS_CLAMP, LOG_ODDS_CLAMP);
        }
    }
    Ok(out)
}
